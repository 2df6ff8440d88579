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

#ifndef TABFUZZ_CLI_HPP_
#define TABFUZZ_CLI_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace tabfuzz {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Each command reports human-readable errors on `err` and returns an exit
// status: 0 success, 1 runtime failure, 2 usage or configuration error.

int cmd_synth(const std::filesystem::path& config, const std::vector<std::string>& overrides,
              std::ostream& out, std::ostream& err);

// Writes report.txt and report.csv to the configured output directory and
// prints the text report.
int cmd_evaluate(const std::filesystem::path& original, const std::filesystem::path& synthetic,
                 const std::filesystem::path& config, std::ostream& out, std::ostream& err);

// Prints `count` grammar-random rows that satisfy the static constraints, as
// CSV with a header. Gives up on a row after kFuzzAttempts draws.
inline constexpr std::size_t kFuzzAttempts = 10000;
int cmd_fuzz(const std::filesystem::path& spec, std::size_t count, std::uint64_t seed,
             std::ostream& out, std::ostream& err);

// Writes curve.csv (iteration against cumulative good samples, with round
// boundaries marked) into the run directory and prints per-round
// discriminator accuracies.
int cmd_report(const std::filesystem::path& run_dir, std::ostream& out, std::ostream& err);

}  // namespace tabfuzz

#endif  // TABFUZZ_CLI_HPP_
