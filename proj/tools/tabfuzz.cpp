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

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tabfuzz/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Grammar-based synthetic tabular data generator"};
  app.require_subcommand(1);

  std::string config;
  std::vector<std::string> overrides;
  auto* synth = app.add_subcommand("synth", "evolve a synthetic dataset from a run config");
  synth->add_option("--config", config, "run config file")->required();
  synth->add_option("--set", overrides, "override a config key (key=value)")->take_all();

  std::string original, synthetic;
  auto* evaluate = app.add_subcommand("evaluate", "score a synthetic dataset against an original");
  evaluate->add_option("--original", original, "original CSV")->required();
  evaluate->add_option("--synthetic", synthetic, "synthetic CSV")->required();
  evaluate->add_option("--config", config, "run config file")->required();

  std::string spec;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  auto* fuzz = app.add_subcommand("fuzz", "print grammar-random rows that meet the constraints");
  fuzz->add_option("--spec", spec, "grammar spec")->required();
  fuzz->add_option("--count", count, "number of rows")->required();
  fuzz->add_option("--seed", seed, "random seed");

  std::string run_dir;
  auto* report = app.add_subcommand("report", "summarize a run directory");
  report->add_option("--run", run_dir, "run output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tabfuzz::kExitUsage;
  }

  if (*synth) return tabfuzz::cmd_synth(config, overrides, std::cout, std::cerr);
  if (*evaluate) return tabfuzz::cmd_evaluate(original, synthetic, config, std::cout, std::cerr);
  if (*fuzz) return tabfuzz::cmd_fuzz(spec, count, seed, std::cout, std::cerr);
  return tabfuzz::cmd_report(run_dir, std::cout, std::cerr);
}
