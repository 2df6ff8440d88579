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

#include "tabfuzz/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tabfuzz/derivation.hpp"
#include "tabfuzz/encoding.hpp"
#include "tabfuzz/errors.hpp"
#include "tabfuzz/rng.hpp"

namespace tabfuzz {
namespace {

void emit(const LogSink& log, const std::string& line) {
  if (log) log(line);
}

void warn(PipelineState& state, const LogSink& log, const std::string& message) {
  state.warnings.push_back(message);
  emit(log, "warning: " + message);
}

RowRecord encoded(const Encoder& encoder, const RowRecord& row) {
  RowRecord out;
  for (double v : encoder.encode(row)) out.values.emplace_back(v);
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Trains original (label 0) versus synthetic (label 1) on a 70/30 split.
DiscriminatorRecord train_discriminator(const Dataset& original, const Dataset& synthetic,
                                        const PipelineConfig& config, std::size_t round) {
  FeatureMatrix x = to_matrix(original);
  const FeatureMatrix xs = to_matrix(synthetic);
  for (std::size_t i = 0; i < xs.rows(); ++i) x.append_row(xs.row(i));
  std::vector<int> y(original.size(), kOriginalLabel);
  y.resize(original.size() + synthetic.size(), kSyntheticLabel);

  const auto [train, test] = split_indices(
      y.size(), kDiscriminatorTrainFraction,
      derive_seed(config.seed, {stream_id("discriminator-split"), round}));
  std::vector<int> y_train;
  for (std::size_t i : train) y_train.push_back(y[i]);
  TreeParams params;
  params.max_depth = config.tree_max_depth;
  params.min_samples_leaf = config.tree_min_leaf;
  auto model = std::make_shared<DecisionTree>(
      DecisionTree::fit_classifier(x.select_rows(train), y_train, 2, params));

  std::size_t correct = 0, originals = 0, originals_kept = 0;
  for (std::size_t i : test) {
    const int label = model->predict_label(x.row(i));
    correct += label == y[i] ? 1 : 0;
    if (y[i] == kOriginalLabel) {
      ++originals;
      originals_kept += label == kOriginalLabel ? 1 : 0;
    }
  }
  DiscriminatorRecord record;
  record.round = round;
  record.accuracy = static_cast<double>(correct) / static_cast<double>(test.size());
  record.original_recall =
      originals ? static_cast<double>(originals_kept) / static_cast<double>(originals) : 1.0;
  record.original_rows = original.size();
  record.synthetic_rows = synthetic.size();
  record.model = std::move(model);
  return record;
}

void activate(PipelineState& state, DiscriminatorRecord record) {
  state.discriminator = record.model;
  state.constraints = state.constraints.with_classifier(
      ClassifierConstraint{state.discriminator, kOriginalLabel});
  state.discriminators.push_back(std::move(record));
}

std::string discriminators_csv(const std::vector<DiscriminatorRecord>& records) {
  std::string out = "round,accuracy,original_recall,original_rows,synthetic_rows,stop\n";
  for (const DiscriminatorRecord& r : records) {
    out += std::to_string(r.round) + "," + format_number(r.accuracy) + "," +
           format_number(r.original_recall) + "," + std::to_string(r.original_rows) + "," +
           std::to_string(r.synthetic_rows) + "," +
           (r.stop ? std::string(stop_reason_name(*r.stop)) : std::string()) + "\n";
  }
  return out;
}

std::string good_samples_csv(const PipelineState& state) {
  const std::string body = to_csv(state.good_samples);
  std::string out = "round,";
  std::size_t line = 0, start = 0;
  while (start < body.size()) {
    const std::size_t nl = body.find('\n', start);
    if (line > 0) out += std::to_string(state.good_rounds[line - 1]) + ",";
    out.append(body, start, nl - start + 1);
    start = nl + 1;
    ++line;
  }
  return out;
}

void flush_progress(const PipelineState& state, const std::filesystem::path& out) {
  write_file_atomic(out / "run_log.csv", run_log_csv(state.run_log));
  write_file_atomic(out / "discriminators.csv", discriminators_csv(state.discriminators));
  if (!state.good_samples.schema.columns().empty()) {
    write_file_atomic(out / "good_samples.csv", good_samples_csv(state));
  }
  std::filesystem::create_directories(out / "checkpoints");
  for (const DiscriminatorRecord& r : state.discriminators) {
    std::ostringstream text;
    r.model->save(text);
    write_file_atomic(out / "checkpoints" / ("discriminator_round" + std::to_string(r.round) + ".tree"),
                      text.str());
  }
}

}  // namespace

std::string_view stop_reason_name(StopReason reason) {
  switch (reason) {
    case StopReason::kQuota: return "quota";
    case StopReason::kMaxIterations: return "max_iterations";
    case StopReason::kStall: return "stall";
    case StopReason::kFooled: return "fooled";
  }
  return "";
}

PipelineState phase1_setup(const PipelineConfig& config, const LogSink& log) {
  config.validate();
  PipelineState state;
  state.grammar = load_spec(config.spec);
  state.schema = schema_from_grammar(state.grammar);
  const std::optional<std::size_t> target = state.schema.index_of_name(config.task_column);
  if (!target) throw SchemaMismatch("task column '" + config.task_column + "' is not in the spec");
  state.schema = state.schema.with_target(config.task_column);
  state.target_column = *target;
  const Encoder encoder(state.schema);
  state.constraints = ConstraintSet(compile_constraints(state.grammar), std::nullopt, encoder);

  state.original = preprocess(load_csv(config.data, state.schema));
  const std::size_t n = state.original.size();
  if (n < 2) throw TooSmall("need at least 2 original rows, have " + std::to_string(n));
  for (const RowRecord& r : state.original.rows) state.original_keys.insert(row_key(r));
  emit(log, "loaded " + std::to_string(n) + " original rows");

  Rng rng(derive_seed(config.seed, {stream_id("phase1")}));
  state.initial_synthetic.schema = state.schema;
  state.initial_synthetic.provenance = Provenance::kSynthetic;
  std::size_t attempts = 0;
  while (state.initial_synthetic.size() < n) {
    if (++attempts > 100 * n + 100) {
      throw UnsatisfiableGrammar("the spec rarely derives well-formed rows");
    }
    const DerivationTree tree = generate_random(state.grammar, state.grammar.row_symbol(), rng,
                                                config.evolution.depth_budget);
    try {
      state.initial_synthetic.rows.push_back(encoded(encoder, tree_to_row(tree, state.schema)));
    } catch (const MalformedRow&) {
    }
  }
  state.good_samples.schema = state.schema;
  state.good_samples.provenance = Provenance::kSynthetic;

  DiscriminatorRecord record = train_discriminator(state.original, state.initial_synthetic, config, 1);
  emit(log, "round 1 discriminator held-out accuracy " + fixed(record.accuracy, 4));
  if (record.accuracy < config.retrain_threshold) {
    warn(state, log,
         "grammar already mimics data: discriminator accuracy " + fixed(record.accuracy, 4));
  }
  activate(state, std::move(record));
  state.round = 1;
  return state;
}

StopReason collect_good_samples(PipelineState& state, const PipelineConfig& config,
                                const LogSink& log) {
  if (!state.discriminator) throw Error("no active discriminator");
  const std::size_t n = state.original.size();
  const std::size_t quota = config.good_samples.value_or(n);
  const std::size_t max_iterations = config.max_iterations.value_or(n);
  const double original_recall =
      state.discriminators.empty() ? 1.0 : state.discriminators.back().original_recall;
  const Encoder& encoder = state.constraints.encoder();

  Rng rng(derive_seed(config.seed, {stream_id("collect"), state.round}));
  Population pop =
      seed_population(state.good_trees, state.grammar, state.constraints, config.evolution, rng);
  std::deque<bool> window;  // fresh samples: true if labeled original
  std::size_t fooled_in_window = 0;
  std::size_t round_new = 0;
  std::size_t since_new = 0;
  std::vector<double> features(encoder.width());

  for (std::size_t iteration = 1;; ++iteration) {
    pop = evolve_step(pop, state.grammar, state.constraints, config.evolution, rng);
    std::size_t new_good = 0;
    for (const Member& m : pop.members) {
      if (!m.row) continue;
      if (m.fresh) {
        encoder.encode_into(*m.row, features);
        const bool fooled = state.discriminator->predict_label(features) == kOriginalLabel;
        window.push_back(fooled);
        fooled_in_window += fooled ? 1 : 0;
        if (window.size() > kFoolWindow) {
          fooled_in_window -= window.front() ? 1 : 0;
          window.pop_front();
        }
      }
      if (!m.fitness.all_satisfied) continue;
      RowRecord row = encoded(encoder, *m.row);
      std::string key = row_key(row);
      if (state.original_keys.count(key)) {
        ++state.original_copies_rejected;
        continue;
      }
      if (!state.good_keys.insert(std::move(key)).second) continue;
      state.good_samples.rows.push_back(std::move(row));
      state.good_trees.push_back(m.tree);
      state.good_rounds.push_back(state.round);
      ++new_good;
    }
    round_new += new_good;
    since_new = new_good ? 0 : since_new + 1;

    RunLogEntry entry;
    entry.round = state.round;
    entry.iteration = iteration;
    entry.new_good = new_good;
    entry.cumulative_good = state.good_samples.size();
    entry.fool_rate = window.empty() ? 0.0
                                     : static_cast<double>(fooled_in_window) /
                                           static_cast<double>(window.size());
    state.run_log.push_back(entry);
    emit(log, "round " + std::to_string(entry.round) + " iteration " +
                  std::to_string(iteration) + ": new_good " + std::to_string(new_good) +
                  " cumulative_good " + std::to_string(entry.cumulative_good) + " fool_rate " +
                  fixed(entry.fool_rate, 3));

    // Balanced accuracy: held-out recall on original rows and recall on the
    // recent generated rows, equally weighted.
    const double balanced = 0.5 * (original_recall + (1.0 - entry.fool_rate));
    std::optional<StopReason> stop;
    if (round_new >= quota) {
      stop = StopReason::kQuota;
    } else if (window.size() == kFoolWindow && balanced < config.retrain_threshold) {
      stop = StopReason::kFooled;
    } else if (since_new >= config.stall_window) {
      stop = StopReason::kStall;
    } else if (iteration >= max_iterations) {
      stop = StopReason::kMaxIterations;
    }
    if (stop) {
      if (!state.discriminators.empty()) state.discriminators.back().stop = *stop;
      emit(log, "round " + std::to_string(state.round) + " collection stopped: " +
                    std::string(stop_reason_name(*stop)));
      return *stop;
    }
    if (!state.good_trees.empty()) {
      pop = reseed(pop, state.good_trees, state.grammar, state.constraints, config.evolution, rng);
    }
  }
}

void retrain_discriminator(PipelineState& state, const PipelineConfig& config,
                           const LogSink& log) {
  if (state.good_samples.empty()) throw Error("cannot retrain the discriminator without good samples");
  if (state.good_samples.size() == 1) {
    warn(state, log, "retraining on a single good sample");
  }
  ++state.round;
  DiscriminatorRecord record =
      train_discriminator(state.original, state.good_samples, config, state.round);
  emit(log, "round " + std::to_string(state.round) + " discriminator held-out accuracy " +
                fixed(record.accuracy, 4));
  activate(state, std::move(record));
}

Dataset final_dataset(const PipelineState& state, std::uint64_t seed) {
  const std::size_t n = state.original.size();
  const std::size_t m = state.good_samples.size();
  if (m <= n) return state.good_samples;
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  Rng rng(derive_seed(seed, {stream_id("final-subsample")}));
  for (std::size_t i = 0; i < n; ++i) std::swap(idx[i], idx[i + rng.uniform_index(m - i)]);
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  return subset(state.good_samples, idx);
}

RunResult run(const PipelineConfig& config, const LogSink& log) {
  config.validate();
  std::filesystem::create_directories(config.out);
  DirectoryLock lock(config.out);
  RunResult result;
  PipelineState& state = result.state;
  try {
    state = phase1_setup(config, log);
    write_file_atomic(config.out / "initial_synthetic.csv", to_csv(state.initial_synthetic));
    UtilityOptions utility;
    utility.forest_trees = config.forest_trees;
    utility.seed = config.seed;
    utility.models = {UtilityModel::kRandomForest};
    for (std::size_t r = 1; r <= config.rounds; ++r) {
      if (r > 1) retrain_discriminator(state, config, log);
      collect_good_samples(state, config, log);
      flush_progress(state, config.out);
      if (config.utility_target && state.good_samples.size() >= 2) {
        const UtilityMatrix m = utility_matrix(state.original, final_dataset(state, config.seed),
                                               state.target_column, config.task_kind, utility);
        const auto& cell = m.at(UtilityModel::kRandomForest, UtilityTask::kTrainGeneratedTestOriginal);
        emit(log, "round " + std::to_string(r) + " forest Train Generated-Test Original " +
                      (cell.score ? fixed(*cell.score, 4) : std::string("undefined")));
        if (cell.score && *cell.score >= *config.utility_target) break;
      }
    }
    result.synthetic = final_dataset(state, config.seed);
    utility.models.clear();
    result.report =
        evaluate(state.original, result.synthetic, state.target_column, config.task_kind, utility);
  } catch (...) {
    try {
      if (!state.discriminators.empty()) flush_progress(state, config.out);
    } catch (...) {
    }
    throw;
  }
  write_file_atomic(config.out / "synthetic.csv", to_csv(result.synthetic));
  std::ostringstream text, csv;
  write_report_text(text, result.report);
  text << "\nRUN\n";
  for (const DiscriminatorRecord& r : state.discriminators) {
    text << "  round " << r.round << ": discriminator accuracy " << fixed(r.accuracy, 4)
         << ", collection stopped by " << (r.stop ? stop_reason_name(*r.stop) : "-") << "\n";
  }
  text << "  good samples collected: " << state.good_samples.size() << "\n";
  text << "  candidates equal to an original row (discarded): " << state.original_copies_rejected
       << "\n";
  for (const std::string& w : state.warnings) text << "  warning: " << w << "\n";
  write_report_csv(csv, result.report);
  write_file_atomic(config.out / "report.txt", text.str());
  write_file_atomic(config.out / "report.csv", csv.str());
  flush_progress(state, config.out);
  return result;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw Error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string run_log_csv(const std::vector<RunLogEntry>& log) {
  std::string out = "round,iteration,new_good,cumulative_good,fool_rate\n";
  for (const RunLogEntry& e : log) {
    out += std::to_string(e.round) + "," + std::to_string(e.iteration) + "," +
           std::to_string(e.new_good) + "," + std::to_string(e.cumulative_good) + "," +
           format_number(e.fool_rate) + "\n";
  }
  return out;
}

std::vector<RunLogEntry> parse_run_log(std::string_view text) {
  std::vector<RunLogEntry> out;
  std::size_t line_no = 0;
  bool header = true;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (header) {
      if (line != "round,iteration,new_good,cumulative_good,fool_rate") {
        throw MalformedRow("run log has an unexpected header");
      }
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    const std::string where = "run log line " + std::to_string(line_no);
    if (cells.size() != 5) throw MalformedRow(where + ": expected 5 fields");
    std::size_t ints[4];
    for (int i = 0; i < 4; ++i) {
      auto [ptr, ec] = std::from_chars(cells[i].data(), cells[i].data() + cells[i].size(), ints[i]);
      if (ec != std::errc() || ptr != cells[i].data() + cells[i].size() || cells[i].empty()) {
        throw MalformedRow(where + ": bad integer '" + std::string(cells[i]) + "'");
      }
    }
    const std::optional<double> rate = parse_number(cells[4]);
    if (!rate) throw MalformedRow(where + ": bad fool rate '" + std::string(cells[4]) + "'");
    out.push_back({ints[0], ints[1], ints[2], ints[3], *rate});
  }
  if (header) throw MalformedRow("run log is empty");
  return out;
}

DirectoryLock::DirectoryLock(const std::filesystem::path& dir) : path_(dir / ".tabfuzz.lock") {
  std::FILE* f = std::fopen(path_.c_str(), "wx");
  if (!f) {
    throw Error("output directory " + dir.string() + " is in use (lock file " + path_.string() +
                ")");
  }
  std::fclose(f);
}

DirectoryLock::~DirectoryLock() {
  std::error_code ec;
  std::filesystem::remove(path_, ec);
}

}  // namespace tabfuzz
