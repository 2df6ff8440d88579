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

// Numeric inner loops with a scalar reference and vector variants.
//
// The active variant is chosen once, on first use: the best instruction set
// the CPU supports, unless the TABFUZZ_SIMD environment variable names one
// ("scalar", "avx2", "neon"). Vector variants reassociate sums, so they agree
// with the scalar reference to rounding, not bit for bit.

#ifndef TABFUZZ_KERNELS_HPP_
#define TABFUZZ_KERNELS_HPP_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace tabfuzz::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

// Instruction sets compiled in and supported by this CPU; scalar is always
// first.
std::vector<Isa> available_isas();

Isa active_isa();

// Overrides the dispatch choice. Returns false if `isa` is unavailable.
bool set_active_isa(Isa isa);

// Every function below takes an optional explicit Isa for equivalence
// testing; by default the active one is used.

double abs_diff_sum(std::span<const double> a, std::span<const double> b);
double abs_diff_sum(Isa isa, std::span<const double> a, std::span<const double> b);

double sq_diff_sum(std::span<const double> a, std::span<const double> b);
double sq_diff_sum(Isa isa, std::span<const double> a, std::span<const double> b);

double weighted_sq_diff_sum(std::span<const double> x,
                            std::span<const double> mu,
                            std::span<const double> w);
double weighted_sq_diff_sum(Isa isa, std::span<const double> x,
                            std::span<const double> mu,
                            std::span<const double> w);

double sum(std::span<const double> x);
double sum(Isa isa, std::span<const double> x);

struct MinMax {
  double lo;
  double hi;
};
// x must be nonempty.
MinMax min_max(std::span<const double> x);
MinMax min_max(Isa isa, std::span<const double> x);

// `prefix` is k class-major rows of n cumulative class counts over a node
// sorted by one feature. Writes n-1 scores to `out`; out[i] is the weighted
// Gini impurity of splitting after position i.
void gini_split_scores(std::span<const double> prefix,
                       std::span<const double> totals, std::size_t n,
                       std::span<double> out);
void gini_split_scores(Isa isa, std::span<const double> prefix,
                       std::span<const double> totals, std::size_t n,
                       std::span<double> out);

// Same for regression: out[i] = SSE(left) + SSE(right).
void sse_split_scores(std::span<const double> prefix_sum,
                      std::span<const double> prefix_sq, double total_sum,
                      double total_sq, std::span<double> out);
void sse_split_scores(Isa isa, std::span<const double> prefix_sum,
                      std::span<const double> prefix_sq, double total_sum,
                      double total_sq, std::span<double> out);

}  // namespace tabfuzz::kernels

#endif  // TABFUZZ_KERNELS_HPP_
