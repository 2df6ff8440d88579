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


#include "tabfuzz/fixtures.hpp"

#include <sstream>

#include <gtest/gtest.h>

#include "tabfuzz/derivation.hpp"
#include "tabfuzz/errors.hpp"
#include "tabfuzz/evaluation.hpp"
#include "tabfuzz/grammar.hpp"
#include "test_util.hpp"

namespace tabfuzz {
namespace {

double original_forest_r2(const Fixture& f) {
  const Grammar g = parse_spec(f.grammar);
  ColumnSchema schema = schema_from_grammar(g).with_target(f.data.schema[f.data.schema.size() - 1].name);
  const Dataset d = preprocess(parse_csv(f.csv, schema));
  UtilityOptions opts;
  opts.models = {UtilityModel::kRandomForest};
  opts.seed = 3;
  const UtilityMatrix m = utility_matrix(d, d, d.schema.size() - 1, TaskKind::kRegression, opts);
  return *m.at(UtilityModel::kRandomForest, UtilityTask::kOriginal).score;
}

TEST(FixtureTest, RowsAreInTheGrammarLanguage) {
  for (const FixtureSpec& spec : {mini_insurance_spec(), pure_noise_spec()}) {
    const Fixture f = make_fixture(spec);
    const Grammar g = parse_spec(f.grammar);
    std::istringstream lines(f.csv);
    std::string line;
    std::getline(lines, line);  // header
    std::size_t rows = 0;
    while (std::getline(lines, line)) {
      EXPECT_TRUE(recognizes(g, g.row_symbol(), line)) << line;
      ++rows;
    }
    EXPECT_EQ(rows, f.data.size());
  }
}

TEST(FixtureTest, PreprocessDropsNothing) {
  const Fixture f = make_fixture(mini_insurance_spec());
  const Grammar g = parse_spec(f.grammar);
  const Dataset d = parse_csv(f.csv, schema_from_grammar(g));
  EXPECT_EQ(d.size(), 600u);
  EXPECT_EQ(preprocess(d).size(), d.size());
}

TEST(FixtureTest, PureInSpecAndSeed) {
  EXPECT_EQ(make_fixture(mini_insurance_spec(5)).csv, make_fixture(mini_insurance_spec(5)).csv);
  EXPECT_NE(make_fixture(mini_insurance_spec(5)).csv, make_fixture(mini_insurance_spec(6)).csv);
}

TEST(FixtureTest, CeilingMatchesClosedForm) {
  // age uniform on 18..64, smoker Bernoulli(0.2), independent noise.
  const double var_age = (47.0 * 47.0 - 1.0) / 12.0;
  const double var = 50.0 * 50.0 * var_age + 800.0 * 800.0 * 0.2 * 0.8 + 200.0 * 200.0;
  const double ceiling = 1.0 - 200.0 * 200.0 / var;
  EXPECT_NEAR(make_fixture(mini_insurance_spec()).r2_ceiling, ceiling, 1e-12);
  EXPECT_NEAR(ceiling, 0.9336, 1e-4);
}

TEST(FixtureTest, InsuranceForestReachesSignal) {
  const Fixture f = make_fixture(mini_insurance_spec());
  const double r2 = original_forest_r2(f);
  EXPECT_GE(r2, 0.8);
  EXPECT_LE(r2, f.r2_ceiling + 0.03);
}

TEST(FixtureTest, NoiseForestFindsNothing) {
  const Fixture f = make_fixture(pure_noise_spec());
  EXPECT_NEAR(f.r2_ceiling, 0.0, 1e-12);
  EXPECT_LE(original_forest_r2(f), 0.1);
}

TEST(FixtureTest, InconsistentSpecsAreRejected) {
  FixtureSpec s = mini_insurance_spec();
  s.features[0].lo = 70;  // lo above hi
  EXPECT_THROW(make_fixture(s), ConfigError);
  s = mini_insurance_spec();
  s.features[3].vocabulary.clear();
  EXPECT_THROW(make_fixture(s), ConfigError);
  s = mini_insurance_spec();
  s.features[3].weights = {1.0};
  EXPECT_THROW(make_fixture(s), ConfigError);
  s = mini_insurance_spec();
  s.target.terms.push_back({"height", 1.0, ""});
  EXPECT_THROW(make_fixture(s), ConfigError);
  s = mini_insurance_spec();
  s.target.terms[1].level = "sometimes";
  EXPECT_THROW(make_fixture(s), ConfigError);
}

TEST(FixtureTest, WritesFiles) {
  testing::TempDir dir;
  const Fixture f = make_fixture(mini_insurance_spec());
  write_fixture(f, dir.path());
  EXPECT_EQ(testing::read_file(dir.path() / "mini_insurance.csv"), f.csv);
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "mini_insurance.grammar"));
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "mini_insurance.meta.txt"));
}

TEST(FixtureTest, CheckedInCopyIsCurrent) {
  const Fixture f = make_fixture(mini_insurance_spec());
  EXPECT_EQ(testing::read_file(testing::source_dir() / "fixtures" / "mini_insurance.csv"), f.csv);
  EXPECT_EQ(testing::read_file(testing::source_dir() / "fixtures" / "mini_insurance.grammar"),
            f.grammar);
}

}  // namespace
}  // namespace tabfuzz
