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

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels/kernel_table.hpp"
#include "tabfuzz/kernels.hpp"

namespace tabfuzz::kernels {
namespace {

using detail::KernelTable;

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(TABFUZZ_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(TABFUZZ_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table_for(Isa isa) {
  switch (isa) {
#if defined(TABFUZZ_HAVE_AVX2)
    case Isa::kAvx2:
      return detail::kAvx2Table;
#endif
#if defined(TABFUZZ_HAVE_NEON)
    case Isa::kNeon:
      return detail::kNeonTable;
#endif
    default:
      return detail::kScalarTable;
  }
}

Isa initial_isa() {
  const std::vector<Isa> isas = available_isas();
  if (const char* env = std::getenv("TABFUZZ_SIMD")) {
    const std::string wanted(env);
    for (Isa isa : isas) {
      if (isa_name(isa) == wanted) return isa;
    }
  }
  return isas.back();
}

std::atomic<Isa>& active_slot() {
  static std::atomic<Isa> slot{initial_isa()};
  return slot;
}

const KernelTable& checked_table(Isa isa) {
  if (!cpu_supports(isa)) {
    throw std::invalid_argument("instruction set not available: " +
                                std::string(isa_name(isa)));
  }
  return table_for(isa);
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

std::vector<Isa> available_isas() {
  std::vector<Isa> isas{Isa::kScalar};
  for (Isa isa : {Isa::kAvx2, Isa::kNeon}) {
    if (cpu_supports(isa)) isas.push_back(isa);
  }
  return isas;
}

Isa active_isa() { return active_slot().load(std::memory_order_relaxed); }

bool set_active_isa(Isa isa) {
  if (!cpu_supports(isa)) return false;
  active_slot().store(isa, std::memory_order_relaxed);
  return true;
}

double abs_diff_sum(std::span<const double> a, std::span<const double> b) {
  return abs_diff_sum(active_isa(), a, b);
}
double abs_diff_sum(Isa isa, std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return checked_table(isa).abs_diff_sum(a.data(), b.data(), a.size());
}

double sq_diff_sum(std::span<const double> a, std::span<const double> b) {
  return sq_diff_sum(active_isa(), a, b);
}
double sq_diff_sum(Isa isa, std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return checked_table(isa).sq_diff_sum(a.data(), b.data(), a.size());
}

double weighted_sq_diff_sum(std::span<const double> x,
                            std::span<const double> mu,
                            std::span<const double> w) {
  return weighted_sq_diff_sum(active_isa(), x, mu, w);
}
double weighted_sq_diff_sum(Isa isa, std::span<const double> x,
                            std::span<const double> mu,
                            std::span<const double> w) {
  assert(x.size() == mu.size() && x.size() == w.size());
  return checked_table(isa).weighted_sq_diff_sum(x.data(), mu.data(), w.data(),
                                                 x.size());
}

double sum(std::span<const double> x) { return sum(active_isa(), x); }
double sum(Isa isa, std::span<const double> x) {
  return checked_table(isa).sum(x.data(), x.size());
}

MinMax min_max(std::span<const double> x) { return min_max(active_isa(), x); }
MinMax min_max(Isa isa, std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("min_max of empty range");
  MinMax r{};
  checked_table(isa).min_max(x.data(), x.size(), &r.lo, &r.hi);
  return r;
}

void gini_split_scores(std::span<const double> prefix,
                       std::span<const double> totals, std::size_t n,
                       std::span<double> out) {
  gini_split_scores(active_isa(), prefix, totals, n, out);
}
void gini_split_scores(Isa isa, std::span<const double> prefix,
                       std::span<const double> totals, std::size_t n,
                       std::span<double> out) {
  if (n < 2) return;
  assert(prefix.size() >= totals.size() * n);
  assert(out.size() >= n - 1);
  checked_table(isa).gini_split_scores(prefix.data(), totals.data(),
                                       totals.size(), n, out.data());
}

void sse_split_scores(std::span<const double> prefix_sum,
                      std::span<const double> prefix_sq, double total_sum,
                      double total_sq, std::span<double> out) {
  sse_split_scores(active_isa(), prefix_sum, prefix_sq, total_sum, total_sq, out);
}
void sse_split_scores(Isa isa, std::span<const double> prefix_sum,
                      std::span<const double> prefix_sq, double total_sum,
                      double total_sq, std::span<double> out) {
  const std::size_t n = prefix_sum.size();
  if (n < 2) return;
  assert(prefix_sq.size() == n);
  assert(out.size() >= n - 1);
  checked_table(isa).sse_split_scores(prefix_sum.data(), prefix_sq.data(),
                                      total_sum, total_sq, n, out.data());
}

}  // namespace tabfuzz::kernels
