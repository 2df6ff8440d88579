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

// Reference kernels. Every vector variant is tested against these.

#include <cmath>

#include "kernels/kernel_table.hpp"

namespace tabfuzz::kernels::detail {
namespace {

double abs_diff_sum(const double* a, const double* b, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

double sq_diff_sum(const double* a, const double* b, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double weighted_sq_diff_sum(const double* x, const double* mu, const double* w,
                            size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double d = x[i] - mu[i];
    s += w[i] * d * d;
  }
  return s;
}

double sum(const double* x, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

void min_max(const double* x, size_t n, double* lo, double* hi) {
  double l = x[0];
  double h = x[0];
  for (size_t i = 1; i < n; ++i) {
    if (x[i] < l) l = x[i];
    if (x[i] > h) h = x[i];
  }
  *lo = l;
  *hi = h;
}

void gini_split_scores(const double* prefix, const double* totals,
                       size_t k, size_t n, double* out) {
  const double total = static_cast<double>(n);
  for (size_t i = 0; i + 1 < n; ++i) {
    const double nl = static_cast<double>(i + 1);
    const double nr = total - nl;
    double sl = 0.0;
    double sr = 0.0;
    for (size_t c = 0; c < k; ++c) {
      const double l = prefix[c * n + i];
      const double r = totals[c] - l;
      sl += l * l;
      sr += r * r;
    }
    out[i] = (nl - sl / nl) + (nr - sr / nr);
  }
}

void sse_split_scores(const double* prefix_sum, const double* prefix_sq,
                      double total_sum, double total_sq, size_t n,
                      double* out) {
  const double total = static_cast<double>(n);
  for (size_t i = 0; i + 1 < n; ++i) {
    const double nl = static_cast<double>(i + 1);
    const double nr = total - nl;
    const double ls = prefix_sum[i];
    const double rs = total_sum - ls;
    const double lq = prefix_sq[i];
    const double rq = total_sq - lq;
    out[i] = (lq - ls * ls / nl) + (rq - rs * rs / nr);
  }
}

}  // namespace

const KernelTable kScalarTable = {
    "scalar",         abs_diff_sum, sq_diff_sum,       weighted_sq_diff_sum,
    sum,              min_max,      gini_split_scores, sse_split_scores,
};

}  // namespace tabfuzz::kernels::detail
