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

#include "tabfuzz/cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "tabfuzz/config.hpp"
#include "tabfuzz/encoding.hpp"
#include "tabfuzz/errors.hpp"
#include "tabfuzz/evolution.hpp"
#include "tabfuzz/evaluation.hpp"
#include "tabfuzz/pipeline.hpp"
#include "tabfuzz/rng.hpp"

namespace tabfuzz {
namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

bool is_usage_error(const std::exception& e) {
  return dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const SyntaxError*>(&e) ||
         dynamic_cast<const UndefinedNonterminal*>(&e);
}

int report_error(const std::exception& e, std::ostream& err, bool schema_is_usage) {
  err << "error: " << e.what() << "\n";
  if (is_usage_error(e)) return kExitUsage;
  if (schema_is_usage &&
      (dynamic_cast<const SchemaMismatch*>(&e) || dynamic_cast<const HeaderMismatch*>(&e) ||
       dynamic_cast<const MalformedRow*>(&e) || dynamic_cast<const UnknownCategory*>(&e))) {
    return kExitUsage;
  }
  return kExitRuntime;
}

}  // namespace

int cmd_synth(const std::filesystem::path& config_path, const std::vector<std::string>& overrides,
              std::ostream& out, std::ostream& err) {
  PipelineConfig config;
  try {
    config = load_config(config_path, overrides);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    const RunResult result = run(config, [&](std::string_view line) { err << line << "\n"; });
    out << "wrote " << result.synthetic.size() << " synthetic rows to "
        << (config.out / "synthetic.csv").string() << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    return report_error(e, err, false);
  }
}

int cmd_evaluate(const std::filesystem::path& original, const std::filesystem::path& synthetic,
                 const std::filesystem::path& config_path, std::ostream& out, std::ostream& err) {
  try {
    const PipelineConfig config = load_config(config_path, {}, false);
    const Grammar grammar = load_spec(config.spec);
    ColumnSchema schema = schema_from_grammar(grammar);
    const std::optional<std::size_t> target = schema.index_of_name(config.task_column);
    if (!target) throw SchemaMismatch("task column '" + config.task_column + "' is not in the spec");
    schema = schema.with_target(config.task_column);
    const Dataset a = preprocess(load_csv(original, schema));
    const Dataset b = preprocess(load_csv(synthetic, schema, Provenance::kSynthetic));
    UtilityOptions options;
    options.forest_trees = config.forest_trees;
    options.seed = config.seed;
    const EvaluationReport report = evaluate(a, b, *target, config.task_kind, options);
    std::ostringstream text, csv;
    write_report_text(text, report);
    write_report_csv(csv, report);
    std::filesystem::create_directories(config.out);
    DirectoryLock lock(config.out);
    write_file_atomic(config.out / "report.txt", text.str());
    write_file_atomic(config.out / "report.csv", csv.str());
    out << text.str();
    return kExitOk;
  } catch (const std::exception& e) {
    return report_error(e, err, true);
  }
}

int cmd_fuzz(const std::filesystem::path& spec, std::size_t count, std::uint64_t seed,
             std::ostream& out, std::ostream& err) {
  try {
    const Grammar grammar = load_spec(spec);
    const ColumnSchema schema = schema_from_grammar(grammar);
    const ConstraintSet constraints(compile_constraints(grammar), std::nullopt, Encoder(schema));
    Rng rng(derive_seed(seed, {stream_id("fuzz")}));
    Dataset rows;
    rows.schema = schema;
    rows.provenance = Provenance::kSynthetic;
    std::vector<std::size_t> failures;
    for (std::size_t i = 0; i < count; ++i) {
      std::optional<SampledRow> sample =
          sample_static_row(grammar, constraints, rng, kFuzzAttempts, &failures);
      if (!sample) {
        const auto worst = std::max_element(failures.begin(), failures.end());
        err << "error: no row satisfied the constraints after " << kFuzzAttempts << " attempts";
        if (worst != failures.end() && *worst > 0) {
          const StaticConstraint& c = constraints.statics()[worst - failures.begin()];
          err << "; constraint '" << c.text() << "' (line " << c.line() << ") failed " << *worst
              << " times";
        }
        err << "\n";
        return kExitRuntime;
      }
      rows.rows.push_back(std::move(sample->row));
    }
    write_csv(out, rows);
    return kExitOk;
  } catch (const std::exception& e) {
    return report_error(e, err, false);
  }
}

int cmd_report(const std::filesystem::path& run_dir, std::ostream& out, std::ostream& err) {
  try {
    const std::vector<RunLogEntry> log = parse_run_log(slurp(run_dir / "run_log.csv"));
    std::size_t previous = 0;
    std::size_t last_round = 0;
    std::size_t last_iteration = 0;
    for (const RunLogEntry& e : log) {
      const bool same_round = e.round == last_round;
      if (e.round < last_round || (same_round && e.iteration != last_iteration + 1) ||
          (!same_round && e.iteration != 1)) {
        throw MalformedRow("run log iterations are out of order at round " +
                           std::to_string(e.round) + " iteration " + std::to_string(e.iteration));
      }
      if (e.cumulative_good < previous || e.cumulative_good != previous + e.new_good) {
        throw MalformedRow("cumulative good samples are inconsistent at round " +
                           std::to_string(e.round) + " iteration " + std::to_string(e.iteration));
      }
      previous = e.cumulative_good;
      last_round = e.round;
      last_iteration = e.iteration;
    }

    std::string curve = "step,round,iteration,cumulative_good,round_boundary\n";
    std::size_t boundaries = 0;
    for (std::size_t i = 0; i < log.size(); ++i) {
      const bool boundary = i > 0 && log[i].round != log[i - 1].round;
      boundaries += boundary ? 1 : 0;
      curve += std::to_string(i + 1) + "," + std::to_string(log[i].round) + "," +
               std::to_string(log[i].iteration) + "," + std::to_string(log[i].cumulative_good) +
               "," + (boundary ? "1" : "0") + "\n";
    }
    write_file_atomic(run_dir / "curve.csv", curve);

    out << "iterations " << log.size() << ", good samples " << previous << ", round boundaries "
        << boundaries << "\n";
    const std::filesystem::path disc = run_dir / "discriminators.csv";
    if (std::filesystem::exists(disc)) {
      std::istringstream lines(slurp(disc));
      std::string line;
      std::getline(lines, line);
      while (std::getline(lines, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (cells.size() < 2) throw MalformedRow("discriminators.csv: short line");
        out << "round " << cells[0] << " discriminator accuracy " << cells[1];
        if (cells.size() >= 6 && !cells[5].empty()) out << ", stopped by " << cells[5];
        out << "\n";
      }
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace tabfuzz
