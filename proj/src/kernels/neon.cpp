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

// AArch64 NEON kernels, two doubles per lane. NEON is mandatory on AArch64,
// so no runtime check guards this table.

#include <arm_neon.h>

#include "kernels/kernel_table.hpp"

namespace tabfuzz::kernels::detail {
namespace {

inline double fabs_scalar(double x) { return __builtin_fabs(x); }

double abs_diff_sum(const double* a, const double* b, size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    acc1 = vaddq_f64(acc1, vabdq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  for (; i + 2 <= n; i += 2) {
    acc0 = vaddq_f64(acc0, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += fabs_scalar(a[i] - b[i]);
  return s;
}

double sq_diff_sum(const double* a, const double* b, size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vaddq_f64(acc, vmulq_f64(d, d));
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double weighted_sq_diff_sum(const double* x, const double* mu, const double* w,
                            size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(x + i), vld1q_f64(mu + i));
    acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(w + i), vmulq_f64(d, d)));
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double d = x[i] - mu[i];
    s += w[i] * d * d;
  }
  return s;
}

double sum(const double* x, size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

void min_max(const double* x, size_t n, double* lo, double* hi) {
  double l = x[0];
  double h = x[0];
  size_t i = 0;
  if (n >= 2) {
    float64x2_t vl = vld1q_f64(x);
    float64x2_t vh = vl;
    for (i = 2; i + 2 <= n; i += 2) {
      const float64x2_t v = vld1q_f64(x + i);
      vl = vminq_f64(vl, v);
      vh = vmaxq_f64(vh, v);
    }
    l = vminvq_f64(vl);
    h = vmaxvq_f64(vh);
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
  const float64x2_t vtotal = vdupq_n_f64(total);
  const float64x2_t step = vdupq_n_f64(2.0);
  const double init[2] = {1.0, 2.0};
  float64x2_t nl = vld1q_f64(init);
  size_t i = 0;
  for (; i + 2 <= positions; i += 2) {
    const float64x2_t nr = vsubq_f64(vtotal, nl);
    float64x2_t sl = vdupq_n_f64(0.0);
    float64x2_t sr = vdupq_n_f64(0.0);
    for (size_t c = 0; c < k; ++c) {
      const float64x2_t l = vld1q_f64(prefix + c * n + i);
      const float64x2_t r = vsubq_f64(vdupq_n_f64(totals[c]), l);
      sl = vaddq_f64(sl, vmulq_f64(l, l));
      sr = vaddq_f64(sr, vmulq_f64(r, r));
    }
    const float64x2_t left = vsubq_f64(nl, vdivq_f64(sl, nl));
    const float64x2_t right = vsubq_f64(nr, vdivq_f64(sr, nr));
    vst1q_f64(out + i, vaddq_f64(left, right));
    nl = vaddq_f64(nl, step);
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
  const float64x2_t vtotal = vdupq_n_f64(total);
  const float64x2_t vts = vdupq_n_f64(total_sum);
  const float64x2_t vtq = vdupq_n_f64(total_sq);
  const float64x2_t step = vdupq_n_f64(2.0);
  const double init[2] = {1.0, 2.0};
  float64x2_t nl = vld1q_f64(init);
  size_t i = 0;
  for (; i + 2 <= positions; i += 2) {
    const float64x2_t nr = vsubq_f64(vtotal, nl);
    const float64x2_t ls = vld1q_f64(prefix_sum + i);
    const float64x2_t lq = vld1q_f64(prefix_sq + i);
    const float64x2_t rs = vsubq_f64(vts, ls);
    const float64x2_t rq = vsubq_f64(vtq, lq);
    const float64x2_t left = vsubq_f64(lq, vdivq_f64(vmulq_f64(ls, ls), nl));
    const float64x2_t right = vsubq_f64(rq, vdivq_f64(vmulq_f64(rs, rs), nr));
    vst1q_f64(out + i, vaddq_f64(left, right));
    nl = vaddq_f64(nl, step);
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

const KernelTable kNeonTable = {
    "neon",           abs_diff_sum, sq_diff_sum,       weighted_sq_diff_sum,
    sum,              min_max,      gini_split_scores, sse_split_scores,
};

}  // namespace tabfuzz::kernels::detail
