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


#include "tabfuzz/config.hpp"

#include <gtest/gtest.h>

#include "tabfuzz/errors.hpp"
#include "tabfuzz/ml.hpp"
#include "test_util.hpp"

namespace tabfuzz {
namespace {

using testing::TempDir;
using testing::write_file;

constexpr const char* kMinimal =
    "spec = a.grammar\n"
    "data = a.csv\n"
    "out = run\n"
    "task_column = income\n"
    "task_kind = regression\n";

TEST(ConfigTest, KeysAreFixed) { EXPECT_EQ(config_keys().size(), 20u); }

TEST(ConfigTest, DefaultsAndRelativePaths) {
  const PipelineConfig c = build_config(parse_config_values(kMinimal), "/base");
  EXPECT_EQ(c.spec, std::filesystem::path("/base/a.grammar"));
  EXPECT_EQ(c.data, std::filesystem::path("/base/a.csv"));
  EXPECT_EQ(c.out, std::filesystem::path("/base/run"));
  EXPECT_EQ(c.seed, 0u);
  EXPECT_FALSE(c.good_samples);
  EXPECT_FALSE(c.max_iterations);
  EXPECT_FALSE(c.utility_target);
  EXPECT_EQ(c.rounds, 3u);
  EXPECT_DOUBLE_EQ(c.retrain_threshold, 0.55);
  EXPECT_EQ(c.stall_window, 50u);
  EXPECT_EQ(c.tree_max_depth, 12u);
  EXPECT_EQ(c.tree_min_leaf, 5u);
  EXPECT_EQ(c.forest_trees, 100u);
  EXPECT_EQ(c.task_kind, TaskKind::kRegression);
}

TEST(ConfigTest, AbsolutePathsAreKept) {
  ConfigValues v = parse_config_values(kMinimal);
  apply_override(v, "spec=/abs/g.grammar");
  EXPECT_EQ(build_config(v, "/base").spec, std::filesystem::path("/abs/g.grammar"));
}

TEST(ConfigTest, CommentsAndBlankLines) {
  const ConfigValues v = parse_config_values("# header\n\n  seed = 7  # trailing\n");
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v.at("seed"), "7");
}

TEST(ConfigTest, MissingDataKey) {
  ConfigValues v = parse_config_values(kMinimal);
  v.erase("data");
  try {
    build_config(v, "/base");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("'data'"), std::string::npos);
  }
  EXPECT_NO_THROW(build_config(v, "/base", /*require_data=*/false));
}

TEST(ConfigTest, UnknownAndRepeatedKeys) {
  EXPECT_THROW(parse_config_values("colour = red\n"), ConfigError);
  EXPECT_THROW(parse_config_values("seed = 1\nseed = 2\n"), ConfigError);
  EXPECT_THROW(parse_config_values("seed 1\n"), ConfigError);
  ConfigValues v = parse_config_values(kMinimal);
  EXPECT_THROW(apply_override(v, "colour=red"), ConfigError);
  EXPECT_THROW(apply_override(v, "seed"), ConfigError);
}

TEST(ConfigTest, OverridesReplaceValues) {
  ConfigValues v = parse_config_values(kMinimal);
  apply_override(v, "rounds=5");
  apply_override(v, "utility_target=0.4");
  apply_override(v, "tree_max_depth=none");
  const PipelineConfig c = build_config(v, "/base");
  EXPECT_EQ(c.rounds, 5u);
  ASSERT_TRUE(c.utility_target);
  EXPECT_DOUBLE_EQ(*c.utility_target, 0.4);
  EXPECT_EQ(c.tree_max_depth, kNoLimit);
  apply_override(v, "utility_target=none");
  EXPECT_FALSE(build_config(v, "/base").utility_target);
}

TEST(ConfigTest, BadValues) {
  for (const char* o : {"rounds=0", "seed=-1", "retrain_threshold=0.3", "retrain_threshold=1",
                        "task_kind=ranking", "mutation_rate=1.5", "population_size=0",
                        "tree_min_leaf=0", "stall_window=x"}) {
    ConfigValues v = parse_config_values(kMinimal);
    apply_override(v, o);
    EXPECT_THROW(build_config(v, "/base"), ConfigError) << o;
  }
}

TEST(ConfigTest, LoadResolvesAgainstConfigDirectory) {
  TempDir dir;
  write_file(dir.path() / "run.config", kMinimal);
  const PipelineConfig c = load_config(dir.path() / "run.config", {"seed=9"});
  EXPECT_EQ(c.spec, dir.path() / "a.grammar");
  EXPECT_EQ(c.seed, 9u);
  EXPECT_THROW(load_config(dir.path() / "absent.config"), ConfigError);
}

}  // namespace
}  // namespace tabfuzz
