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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tabfuzz/errors.hpp"
#include "tabfuzz/row.hpp"

namespace tabfuzz {
namespace {

std::string_view trim(std::string_view s) {
  const auto blank = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && blank(s.back())) s.remove_suffix(1);
  return s;
}

bool known_key(std::string_view key) {
  const auto& keys = config_keys();
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

std::uint64_t to_unsigned(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
  }
  return v;
}

double to_double(const std::string& key, const std::string& value) {
  const std::optional<double> v = parse_number(value);
  if (!v) throw ConfigError(key + ": expected a number, got '" + value + "'");
  return *v;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "spec",           "data",          "out",          "seed",
      "good_samples",   "max_iterations", "rounds",      "retrain_threshold",
      "stall_window",   "utility_target", "task_column", "task_kind",
      "population_size", "elite_fraction", "mutation_rate", "crossover_rate",
      "tournament_size", "tree_max_depth", "tree_min_leaf", "forest_trees",
  };
  return keys;
}

ConfigValues parse_config_values(std::string_view text) {
  ConfigValues values;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!known_key(key)) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (!values.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": repeated key '" + key + "'");
    }
  }
  return values;
}

void apply_override(ConfigValues& values, std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  }
  const std::string key(trim(assignment.substr(0, eq)));
  if (!known_key(key)) throw ConfigError("unknown override key '" + key + "'");
  values[key] = std::string(trim(assignment.substr(eq + 1)));
}

void PipelineConfig::validate() const {
  if (good_samples && *good_samples < 1) throw ConfigError("good_samples must be at least 1");
  if (max_iterations && *max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
  if (rounds < 1) throw ConfigError("rounds must be at least 1");
  if (!(retrain_threshold >= 0.5 && retrain_threshold < 1.0)) {
    throw ConfigError("retrain_threshold must lie in [0.5, 1)");
  }
  if (stall_window < 1) throw ConfigError("stall_window must be at least 1");
  if (tree_max_depth < 1) throw ConfigError("tree_max_depth must be at least 1");
  if (tree_min_leaf < 1) throw ConfigError("tree_min_leaf must be at least 1");
  if (forest_trees < 1) throw ConfigError("forest_trees must be at least 1");
  if (task_column.empty()) throw ConfigError("task_column must not be empty");
  evolution.validate();
}

PipelineConfig build_config(const ConfigValues& values, const std::filesystem::path& base_dir,
                            bool require_data) {
  std::vector<std::string> required = {"spec", "out", "task_column", "task_kind"};
  if (require_data) required.insert(required.begin() + 1, "data");
  for (const std::string& key : required) {
    if (!values.count(key)) throw ConfigError("missing required key '" + key + "'");
  }
  PipelineConfig c;
  auto path = [&](const std::string& value) {
    const std::filesystem::path p(value);
    return p.is_absolute() ? p : base_dir / p;
  };
  for (const auto& [key, value] : values) {
    if (key == "spec") {
      c.spec = path(value);
    } else if (key == "data") {
      c.data = path(value);
    } else if (key == "out") {
      c.out = path(value);
    } else if (key == "seed") {
      c.seed = to_unsigned(key, value);
    } else if (key == "good_samples") {
      c.good_samples = to_unsigned(key, value);
    } else if (key == "max_iterations") {
      c.max_iterations = to_unsigned(key, value);
    } else if (key == "rounds") {
      c.rounds = to_unsigned(key, value);
    } else if (key == "retrain_threshold") {
      c.retrain_threshold = to_double(key, value);
    } else if (key == "stall_window") {
      c.stall_window = to_unsigned(key, value);
    } else if (key == "utility_target") {
      if (value == "none" || value == "-inf") {
        c.utility_target.reset();
      } else {
        c.utility_target = to_double(key, value);
      }
    } else if (key == "task_column") {
      c.task_column = value;
    } else if (key == "task_kind") {
      const std::optional<TaskKind> kind = parse_task_kind(value);
      if (!kind) throw ConfigError("task_kind must be classification or regression");
      c.task_kind = *kind;
    } else if (key == "population_size") {
      c.evolution.population_size = to_unsigned(key, value);
    } else if (key == "elite_fraction") {
      c.evolution.elite_fraction = to_double(key, value);
    } else if (key == "mutation_rate") {
      c.evolution.mutation_rate = to_double(key, value);
    } else if (key == "crossover_rate") {
      c.evolution.crossover_rate = to_double(key, value);
    } else if (key == "tournament_size") {
      c.evolution.tournament_size = to_unsigned(key, value);
    } else if (key == "tree_max_depth") {
      c.tree_max_depth = value == "none" ? kNoLimit : to_unsigned(key, value);
    } else if (key == "tree_min_leaf") {
      c.tree_min_leaf = to_unsigned(key, value);
    } else if (key == "forest_trees") {
      c.forest_trees = to_unsigned(key, value);
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path,
                           const std::vector<std::string>& overrides, bool require_data) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  ConfigValues values = parse_config_values(text.str());
  for (const std::string& o : overrides) apply_override(values, o);
  return build_config(values, path.parent_path(), require_data);
}

}  // namespace tabfuzz
