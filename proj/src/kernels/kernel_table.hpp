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

// Raw-pointer kernel ABI shared by the scalar, AVX2 and NEON translation
// units. Kept free of standard library headers beyond <stddef.h> so the NEON
// unit can be syntax-checked with a freestanding cross compiler.

#ifndef TABFUZZ_SRC_KERNELS_KERNEL_TABLE_HPP_
#define TABFUZZ_SRC_KERNELS_KERNEL_TABLE_HPP_

#include <stddef.h>

namespace tabfuzz::kernels::detail {

struct KernelTable {
  const char* name;

  // sum_i |a[i] - b[i]|
  double (*abs_diff_sum)(const double* a, const double* b, size_t n);
  // sum_i (a[i] - b[i])^2
  double (*sq_diff_sum)(const double* a, const double* b, size_t n);
  // sum_i w[i] * (x[i] - mu[i])^2
  double (*weighted_sq_diff_sum)(const double* x, const double* mu,
                                 const double* w, size_t n);
  double (*sum)(const double* x, size_t n);
  // n >= 1
  void (*min_max)(const double* x, size_t n, double* lo, double* hi);

  // Weighted Gini impurity n_L*G_L + n_R*G_R of every split of a sorted node.
  // `prefix` holds k class-major rows of n cumulative counts; out[i] scores
  // the split after position i, for i in [0, n-2].
  void (*gini_split_scores)(const double* prefix, const double* totals,
                            size_t k, size_t n, double* out);

  // Summed squared error SSE_L + SSE_R of every split, from cumulative sums
  // and cumulative sums of squares. out[i] for i in [0, n-2].
  void (*sse_split_scores)(const double* prefix_sum, const double* prefix_sq,
                           double total_sum, double total_sq, size_t n,
                           double* out);
};

extern const KernelTable kScalarTable;
#if defined(TABFUZZ_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
#if defined(TABFUZZ_HAVE_NEON)
extern const KernelTable kNeonTable;
#endif

}  // namespace tabfuzz::kernels::detail

#endif  // TABFUZZ_SRC_KERNELS_KERNEL_TABLE_HPP_
