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

#ifndef TABFUZZ_FIXTURES_HPP_
#define TABFUZZ_FIXTURES_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tabfuzz/row.hpp"
#include "tabfuzz/tabular.hpp"

namespace tabfuzz {

struct FixtureColumn {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  // Numeric: uniform on the grid lo, lo + 10^-decimals, ..., hi. Values must
  // be non-negative.
  double lo = 0.0;
  double hi = 0.0;
  int decimals = 0;
  // Categorical: levels drawn with the given weights (uniform if empty).
  std::vector<std::string> vocabulary;
  std::vector<double> weights;
};

// coefficient * value for a numeric column, coefficient * [value == level]
// for a categorical one.
struct FixtureTerm {
  std::string column;
  double coefficient = 0.0;
  std::string level;
};

// intercept + terms + N(0, noise_sigma), rounded to `decimals` and clipped to
// [lo, hi].
struct FixtureTarget {
  std::string name;
  double intercept = 0.0;
  std::vector<FixtureTerm> terms;
  double noise_sigma = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int decimals = 0;
};

struct FixtureSpec {
  std::string name;
  std::size_t rows = 0;
  std::vector<FixtureColumn> features;
  FixtureTarget target;
  std::uint64_t seed = 0;

  // Throws ConfigError for inconsistent ranges, vocabularies or terms.
  void validate() const;
};

struct Fixture {
  std::string name;
  Dataset data;         // raw cells, target last
  std::string csv;      // rows joined with ", " so each line is a grammar row
  std::string grammar;  // spec text whose <row> language contains every row
  std::string meta;     // planted dependencies and the R^2 ceiling
  // 1 - noise variance / target variance, ignoring rounding and clipping.
  double r2_ceiling = 0.0;
};

Fixture make_fixture(const FixtureSpec& spec);

// 600 rows; age 18-64, sex, bmi 15-45, smoker (20%);
// charges = 1000 + 50 age + 800 smoker + N(0, 200) in [1000, 9999].
FixtureSpec mini_insurance_spec(std::uint64_t seed = 2026);
// Same features, charges = N(5500, 2000) clipped, independent of them.
FixtureSpec pure_noise_spec(std::uint64_t seed = 2026);

// Writes <name>.csv, <name>.grammar and <name>.meta.txt into `dir`.
void write_fixture(const Fixture& fixture, const std::filesystem::path& dir);

}  // namespace tabfuzz

#endif  // TABFUZZ_FIXTURES_HPP_
