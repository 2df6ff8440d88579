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

#include "tabfuzz/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include <gtest/gtest.h>

#include "tabfuzz/rng.hpp"

namespace tabfuzz::kernels {

void PrintTo(Isa isa, std::ostream* os) { *os << isa_name(isa); }

namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n, double lo = -100, double hi = 100) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

void expect_close(double got, double want) {
  EXPECT_NEAR(got, want, 1e-9 * std::max(1.0, std::fabs(want)));
}

class KernelIsaTest : public ::testing::TestWithParam<Isa> {};

TEST_P(KernelIsaTest, ReductionsMatchNaiveLoops) {
  const Isa isa = GetParam();
  Rng rng(17);
  for (std::size_t n = 0; n < 70; ++n) {
    const std::vector<double> a = random_vector(rng, n);
    const std::vector<double> b = random_vector(rng, n);
    const std::vector<double> w = random_vector(rng, n, 0, 2);
    double abs = 0, sq = 0, wsq = 0, s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      abs += std::fabs(a[i] - b[i]);
      sq += (a[i] - b[i]) * (a[i] - b[i]);
      wsq += w[i] * (a[i] - b[i]) * (a[i] - b[i]);
      s += a[i];
    }
    expect_close(abs_diff_sum(isa, a, b), abs);
    expect_close(sq_diff_sum(isa, a, b), sq);
    expect_close(weighted_sq_diff_sum(isa, a, b, w), wsq);
    expect_close(sum(isa, a), s);
    if (n > 0) {
      const MinMax mm = min_max(isa, a);
      EXPECT_EQ(mm.lo, *std::min_element(a.begin(), a.end()));
      EXPECT_EQ(mm.hi, *std::max_element(a.begin(), a.end()));
    }
  }
}

TEST_P(KernelIsaTest, GiniScoresMatchDirectImpurity) {
  const Isa isa = GetParam();
  Rng rng(23);
  for (std::size_t n = 2; n < 40; ++n) {
    for (std::size_t k : {2u, 3u, 5u}) {
      std::vector<std::size_t> labels(n);
      for (auto& y : labels) y = rng.uniform_index(k);
      std::vector<double> prefix(k * n, 0.0), totals(k, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < k; ++c) {
          prefix[c * n + i] = (i ? prefix[c * n + i - 1] : 0.0) + (labels[i] == c ? 1.0 : 0.0);
        }
        totals[labels[i]] += 1.0;
      }
      std::vector<double> out(n - 1);
      gini_split_scores(isa, prefix, totals, n, out);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        // Left holds positions [0, i], right the rest; score is size-weighted Gini.
        std::vector<double> lc(k, 0), rc(k, 0);
        for (std::size_t j = 0; j < n; ++j) (j <= i ? lc : rc)[labels[j]] += 1;
        const double nl = static_cast<double>(i + 1), nr = static_cast<double>(n - i - 1);
        double gl = 1, gr = 1;
        for (std::size_t c = 0; c < k; ++c) {
          gl -= (lc[c] / nl) * (lc[c] / nl);
          gr -= (rc[c] / nr) * (rc[c] / nr);
        }
        expect_close(out[i], nl * gl + nr * gr);
      }
    }
  }
}

TEST_P(KernelIsaTest, SseScoresMatchDirectVariance) {
  const Isa isa = GetParam();
  Rng rng(29);
  for (std::size_t n = 2; n < 40; ++n) {
    const std::vector<double> y = random_vector(rng, n, 0, 10);
    std::vector<double> ps(n), pq(n);
    double s = 0, q = 0;
    for (std::size_t i = 0; i < n; ++i) {
      s += y[i];
      q += y[i] * y[i];
      ps[i] = s;
      pq[i] = q;
    }
    std::vector<double> out(n - 1);
    sse_split_scores(isa, ps, pq, s, q, out);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      double ml = 0, mr = 0;
      for (std::size_t j = 0; j <= i; ++j) ml += y[j];
      for (std::size_t j = i + 1; j < n; ++j) mr += y[j];
      ml /= static_cast<double>(i + 1);
      mr /= static_cast<double>(n - i - 1);
      double sse = 0;
      for (std::size_t j = 0; j < n; ++j) {
        const double d = y[j] - (j <= i ? ml : mr);
        sse += d * d;
      }
      EXPECT_NEAR(out[i], sse, 1e-7);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(AllIsas, KernelIsaTest, ::testing::ValuesIn(available_isas()),
                         [](const ::testing::TestParamInfo<Isa>& info) {
                           return std::string(isa_name(info.param));
                         });

TEST(KernelDispatchTest, ScalarIsAlwaysAvailableAndFirst) {
  const std::vector<Isa> isas = available_isas();
  ASSERT_FALSE(isas.empty());
  EXPECT_EQ(isas.front(), Isa::kScalar);
}

TEST(KernelDispatchTest, OverrideSwitchesActiveIsa) {
  const Isa before = active_isa();
  for (Isa isa : available_isas()) {
    ASSERT_TRUE(set_active_isa(isa));
    EXPECT_EQ(active_isa(), isa);
  }
  set_active_isa(before);
}

TEST(KernelDispatchTest, MinMaxOfEmptyThrows) {
  EXPECT_THROW(min_max(std::span<const double>{}), std::invalid_argument);
}

}  // namespace
}  // namespace tabfuzz::kernels
