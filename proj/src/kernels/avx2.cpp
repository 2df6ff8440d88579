// Copyright 2026 The Tabfuzz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// AVX2 kernels, four doubles per lane. This unit is compiled with -mavx2 and
// is only entered after a runtime CPU check.

#include <immintrin.h>

#include <cmath>

#include "kernels/kernel_table.hpp"

namespace tabfuzz::kernels::detail {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline __m256d vabs(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

double abs_diff_sum(const double* a, const double* b, size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(
        acc0, vabs(_mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i))));
    acc1 = _mm256_add_pd(acc1, vabs(_mm256_sub_pd(_mm256_loadu_pd(a + i + 4),
                                                  _mm256_loadu_pd(b + i + 4))));
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(
        acc0, vabs(_mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i))));
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

double sq_diff_sum(const double* a, const double* b, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double weighted_sq_diff_sum(const double* x, const double* mu, const double* w,
                            size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(mu + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_mul_pd(d, d)));
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = x[i] - mu[i];
    s += w[i] * d * d;
  }
  return s;
}

double sum(const double* x, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

void min_max(const double* x, size_t n, double* lo, double* hi) {
  double l = x[0];
  double h = x[0];
  size_t i = 0;
  if (n >= 4) {
    __m256d vl = _mm256_loadu_pd(x);
    __m256d vh = vl;
    for (i = 4; i + 4 <= n; i += 4) {
      const __m256d v = _mm256_loadu_pd(x + i);
      vl = _mm256_min_pd(vl, v);
      vh = _mm256_max_pd(vh, v);
    }
    alignas(32) double bl[4];
    alignas(32) double bh[4];
    _mm256_store_pd(bl, vl);
    _mm256_store_pd(bh, vh);
    l = bl[0];
    h = bh[0];
    for (int j = 1; j < 4; ++j) {
      if (bl[j] < l) l = bl[j];
      if (bh[j] > h) h = bh[j];
    }
  }
  for (; i < n; ++i) {
    if (x[i] < l) l = x[i];
    if (x[i] > h) h = x[i];
  }
  *lo = l;
  *hi = h;
}

void gini_split_scores(const double* prefix, const double* totals,
                       size_t k, size_t n, double* out) {
  const double total = static_cast<double>(n);
  const size_t positions = n > 0 ? n - 1 : 0;
  const __m256d vtotal = _mm256_set1_pd(total);
  const __m256d step = _mm256_set1_pd(4.0);
  __m256d nl = _mm256_setr_pd(1.0, 2.0, 3.0, 4.0);
  size_t i = 0;
  for (; i + 4 <= positions; i += 4) {
    const __m256d nr = _mm256_sub_pd(vtotal, nl);
    __m256d sl = _mm256_setzero_pd();
    __m256d sr = _mm256_setzero_pd();
    for (size_t c = 0; c < k; ++c) {
      const __m256d l = _mm256_loadu_pd(prefix + c * n + i);
      const __m256d r = _mm256_sub_pd(_mm256_set1_pd(totals[c]), l);
      sl = _mm256_add_pd(sl, _mm256_mul_pd(l, l));
      sr = _mm256_add_pd(sr, _mm256_mul_pd(r, r));
    }
    const __m256d left = _mm256_sub_pd(nl, _mm256_div_pd(sl, nl));
    const __m256d right = _mm256_sub_pd(nr, _mm256_div_pd(sr, nr));
    _mm256_storeu_pd(out + i, _mm256_add_pd(left, right));
    nl = _mm256_add_pd(nl, step);
  }
  for (; i < positions; ++i) {
    const double l_n = static_cast<double>(i + 1);
    const double r_n = total - l_n;
    double sl = 0.0;
    double sr = 0.0;
    for (size_t c = 0; c < k; ++c) {
      const double l = prefix[c * n + i];
      const double r = totals[c] - l;
      sl += l * l;
      sr += r * r;
    }
    out[i] = (l_n - sl / l_n) + (r_n - sr / r_n);
  }
}

void sse_split_scores(const double* prefix_sum, const double* prefix_sq,
                      double total_sum, double total_sq, size_t n,
                      double* out) {
  const double total = static_cast<double>(n);
  const size_t positions = n > 0 ? n - 1 : 0;
  const __m256d vtotal = _mm256_set1_pd(total);
  const __m256d vts = _mm256_set1_pd(total_sum);
  const __m256d vtq = _mm256_set1_pd(total_sq);
  const __m256d step = _mm256_set1_pd(4.0);
  __m256d nl = _mm256_setr_pd(1.0, 2.0, 3.0, 4.0);
  size_t i = 0;
  for (; i + 4 <= positions; i += 4) {
    const __m256d nr = _mm256_sub_pd(vtotal, nl);
    const __m256d ls = _mm256_loadu_pd(prefix_sum + i);
    const __m256d lq = _mm256_loadu_pd(prefix_sq + i);
    const __m256d rs = _mm256_sub_pd(vts, ls);
    const __m256d rq = _mm256_sub_pd(vtq, lq);
    const __m256d left = _mm256_sub_pd(lq, _mm256_div_pd(_mm256_mul_pd(ls, ls), nl));
    const __m256d right = _mm256_sub_pd(rq, _mm256_div_pd(_mm256_mul_pd(rs, rs), nr));
    _mm256_storeu_pd(out + i, _mm256_add_pd(left, right));
    nl = _mm256_add_pd(nl, step);
  }
  for (; i < positions; ++i) {
    const double l_n = static_cast<double>(i + 1);
    const double r_n = total - l_n;
    const double ls = prefix_sum[i];
    const double rs = total_sum - ls;
    const double lq = prefix_sq[i];
    const double rq = total_sq - lq;
    out[i] = (lq - ls * ls / l_n) + (rq - rs * rs / r_n);
  }
}

}  // namespace

const KernelTable kAvx2Table = {
    "avx2",           abs_diff_sum, sq_diff_sum,       weighted_sq_diff_sum,
    sum,              min_max,      gini_split_scores, sse_split_scores,
};

}  // namespace tabfuzz::kernels::detail
