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

#ifndef TABFUZZ_PIPELINE_HPP_
#define TABFUZZ_PIPELINE_HPP_

#include <cstddef>
#include <deque>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "tabfuzz/config.hpp"
#include "tabfuzz/constraints.hpp"
#include "tabfuzz/evaluation.hpp"
#include "tabfuzz/evolution.hpp"
#include "tabfuzz/grammar.hpp"
#include "tabfuzz/ml.hpp"
#include "tabfuzz/tabular.hpp"

namespace tabfuzz {

// Receives warnings and progress lines.
using LogSink = std::function<void(std::string_view)>;

struct RunLogEntry {
  std::size_t round = 0;
  std::size_t iteration = 0;  // counted from 1 within the round
  std::size_t new_good = 0;
  std::size_t cumulative_good = 0;
  // Share of the most recent fresh samples (up to kFoolWindow) that the
  // active discriminator labels original.
  double fool_rate = 0.0;

  bool operator==(const RunLogEntry&) const = default;
};

enum class StopReason { kQuota, kMaxIterations, kStall, kFooled };
std::string_view stop_reason_name(StopReason reason);

struct DiscriminatorRecord {
  std::size_t round = 0;  // round whose collection it guides
  double accuracy = 0.0;  // held-out accuracy on the 30% share
  // Held-out share of original rows it labels original.
  double original_recall = 0.0;
  std::size_t original_rows = 0;
  std::size_t synthetic_rows = 0;
  std::optional<StopReason> stop;  // how the round's collection ended
  std::shared_ptr<const DecisionTree> model;
};

inline constexpr std::size_t kFoolWindow = 200;
inline constexpr double kDiscriminatorTrainFraction = 0.7;

struct PipelineState {
  Grammar grammar;
  ColumnSchema schema;
  std::size_t target_column = 0;
  ConstraintSet constraints{{}, std::nullopt, Encoder()};  // statics plus the discriminator
  Dataset original;           // preprocessed
  Dataset initial_synthetic;  // preprocessed representation of the phase-1 rows

  std::size_t round = 0;
  std::shared_ptr<const Classifier> discriminator;
  std::vector<DiscriminatorRecord> discriminators;

  // Duplicate-free, in collection order, preprocessed representation.
  Dataset good_samples;
  std::vector<DerivationTree> good_trees;
  std::vector<std::size_t> good_rounds;
  std::unordered_set<std::string> good_keys;
  std::unordered_set<std::string> original_keys;
  // Candidates equal to an original row; counted and never kept.
  std::size_t original_copies_rejected = 0;

  std::vector<RunLogEntry> run_log;
  std::vector<std::string> warnings;
};

// Loads the spec and data, generates as many grammar-random rows as the
// preprocessed original has, and trains the first discriminator on a 70/30
// split of original versus random rows.
PipelineState phase1_setup(const PipelineConfig& config, const LogSink& log = {});

// Evolves the population against the active discriminator until the round's
// quota, max_iterations, stall_window iterations without a new good sample,
// or the rolling balanced accuracy falling below retrain_threshold.
StopReason collect_good_samples(PipelineState& state, const PipelineConfig& config,
                                const LogSink& log = {});

// Trains a new discriminator on the original rows versus all good samples.
// Throws Error when there are no good samples.
void retrain_discriminator(PipelineState& state, const PipelineConfig& config,
                           const LogSink& log = {});

// Good samples truncated to the original size by a seeded, order-keeping
// uniform subsample.
Dataset final_dataset(const PipelineState& state, std::uint64_t seed);

struct RunResult {
  PipelineState state;
  Dataset synthetic;
  EvaluationReport report;
};

// The full loop. Writes synthetic.csv, run_log.csv, report.txt, report.csv,
// discriminators.csv, good_samples.csv and per-round discriminator
// checkpoints to config.out, each replaced atomically. A lock file guards the
// directory for the duration of the run. On failure the artifacts available
// so far are flushed before the error propagates.
RunResult run(const PipelineConfig& config, const LogSink& log = {});

// Replaces `path` with `contents` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string run_log_csv(const std::vector<RunLogEntry>& log);
// Throws MalformedRow for a corrupt log.
std::vector<RunLogEntry> parse_run_log(std::string_view text);

// Exclusive ownership of an output directory; throws Error if held.
class DirectoryLock {
 public:
  explicit DirectoryLock(const std::filesystem::path& dir);
  ~DirectoryLock();
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  std::filesystem::path path_;
};

}  // namespace tabfuzz

#endif  // TABFUZZ_PIPELINE_HPP_
