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

#ifndef TABFUZZ_CONFIG_HPP_
#define TABFUZZ_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabfuzz/evaluation.hpp"
#include "tabfuzz/evolution.hpp"

namespace tabfuzz {

struct PipelineConfig {
  std::filesystem::path spec;
  std::filesystem::path data;
  std::filesystem::path out;
  std::uint64_t seed = 0;
  // Both default to the size of the preprocessed original dataset.
  std::optional<std::size_t> good_samples;
  std::optional<std::size_t> max_iterations;
  std::size_t rounds = 3;
  double retrain_threshold = 0.55;
  std::size_t stall_window = 50;
  std::optional<double> utility_target;
  std::string task_column;
  TaskKind task_kind = TaskKind::kRegression;
  EvolutionConfig evolution;
  // Discriminator capacity.
  std::size_t tree_max_depth = 12;
  std::size_t tree_min_leaf = 5;
  // Utility forests.
  std::size_t forest_trees = 100;

  // Throws ConfigError naming the offending key.
  void validate() const;
};

// Raw key = value pairs, keyed by config key.
using ConfigValues = std::map<std::string, std::string>;

// Every accepted key, in documentation order.
const std::vector<std::string>& config_keys();

// One `key = value` per line; `#` starts a comment; blank lines are ignored.
// Throws ConfigError for an unknown or repeated key or a line without `=`.
ConfigValues parse_config_values(std::string_view text);

// Applies a `key=value` override. Throws ConfigError for an unknown key.
void apply_override(ConfigValues& values, std::string_view assignment);

// Converts and validates values. Relative paths resolve against `base_dir`.
// `spec`, `out`, `task_column` and `task_kind` are always required, `data`
// only when `require_data` is set.
PipelineConfig build_config(const ConfigValues& values, const std::filesystem::path& base_dir,
                            bool require_data = true);

PipelineConfig load_config(const std::filesystem::path& path,
                           const std::vector<std::string>& overrides = {},
                           bool require_data = true);

}  // namespace tabfuzz

#endif  // TABFUZZ_CONFIG_HPP_
