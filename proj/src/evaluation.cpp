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

#include "tabfuzz/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

#include "tabfuzz/errors.hpp"
#include "tabfuzz/kernels.hpp"
#include "tabfuzz/rng.hpp"

namespace tabfuzz {
namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

struct Prepared {
  TaskData train;
  TaskData test;
};

Prepared prepare(const Dataset& data, std::size_t target, double train_fraction,
                 std::uint64_t seed) {
  auto [train_idx, test_idx] = split_indices(data.size(), train_fraction, seed);
  return {to_task(subset(data, train_idx), target), to_task(subset(data, test_idx), target)};
}

std::vector<int> to_labels(const std::vector<double>& y, const std::map<double, int>& classes) {
  std::vector<int> out;
  out.reserve(y.size());
  for (double v : y) out.push_back(classes.at(v));
  return out;
}

std::vector<double> to_codes(const std::vector<double>& y, const std::map<double, int>& classes) {
  std::vector<double> out;
  out.reserve(y.size());
  for (double v : y) out.push_back(classes.at(v));
  return out;
}

}  // namespace

double wasserstein_1d(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("wasserstein_1d needs nonempty samples");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const std::size_t n = sa.size();
  const std::size_t m = sb.size();
  if (n == m) return kernels::abs_diff_sum(sa, sb) / static_cast<double>(n);

  // Walk the merged quantile breakpoints i/n and j/m, measured in units of
  // 1/(n*m) so that breakpoint comparisons are exact.
  double total = 0.0;
  std::size_t i = 0, j = 0;
  std::size_t pos = 0;
  while (i < n && j < m) {
    const std::size_t end_a = (i + 1) * m;
    const std::size_t end_b = (j + 1) * n;
    const std::size_t end = std::min(end_a, end_b);
    total += std::fabs(sa[i] - sb[j]) * static_cast<double>(end - pos);
    pos = end;
    if (end == end_a) ++i;
    if (end == end_b) ++j;
  }
  return total / (static_cast<double>(n) * static_cast<double>(m));
}

ResemblanceReport resemblance(const Dataset& original, const Dataset& synthetic) {
  if (original.schema.size() != synthetic.schema.size()) {
    throw SchemaMismatch("datasets have " + std::to_string(original.schema.size()) + " and " +
                         std::to_string(synthetic.schema.size()) + " columns");
  }
  auto [a, b] = normalize(original, synthetic);
  ResemblanceReport report;
  report.features = original.schema.names();
  for (std::size_t j = 0; j < a.cols(); ++j) {
    report.distances.push_back(wasserstein_1d(a.column(j), b.column(j)));
  }
  double s = 0.0;
  for (double d : report.distances) s += d;
  report.aggregate = report.distances.empty() ? 0.0 : s / static_cast<double>(report.distances.size());
  return report;
}

std::string_view task_kind_name(TaskKind kind) {
  return kind == TaskKind::kClassification ? "classification" : "regression";
}

std::optional<TaskKind> parse_task_kind(std::string_view text) {
  if (text == "classification") return TaskKind::kClassification;
  if (text == "regression") return TaskKind::kRegression;
  return std::nullopt;
}

std::string_view model_name(UtilityModel model) {
  switch (model) {
    case UtilityModel::kDecisionTree: return "decision_tree";
    case UtilityModel::kRandomForest: return "random_forest";
    case UtilityModel::kNaiveBayes: return "naive_bayes";
  }
  return "";
}

std::string_view task_name(UtilityTask task) {
  switch (task) {
    case UtilityTask::kOriginal: return "Original";
    case UtilityTask::kGenerated: return "Generated";
    case UtilityTask::kTrainOriginalTestGenerated: return "Train Original-Test Generated";
    case UtilityTask::kTrainGeneratedTestOriginal: return "Train Generated-Test Original";
  }
  return "";
}

std::string_view task_csv_name(UtilityTask task) {
  switch (task) {
    case UtilityTask::kOriginal: return "original";
    case UtilityTask::kGenerated: return "generated";
    case UtilityTask::kTrainOriginalTestGenerated: return "train_original_test_generated";
    case UtilityTask::kTrainGeneratedTestOriginal: return "train_generated_test_original";
  }
  return "";
}

std::vector<UtilityModel> default_models(TaskKind kind) {
  if (kind == TaskKind::kClassification) {
    return {UtilityModel::kDecisionTree, UtilityModel::kRandomForest, UtilityModel::kNaiveBayes};
  }
  return {UtilityModel::kDecisionTree, UtilityModel::kRandomForest};
}

const UtilityCell& UtilityMatrix::at(UtilityModel model, UtilityTask task) const {
  for (const UtilityCell& c : cells) {
    if (c.model == model && c.task == task) return c;
  }
  throw std::out_of_range("no utility cell for " + std::string(model_name(model)));
}

UtilityMatrix utility_matrix(const Dataset& original, const Dataset& synthetic,
                             std::size_t target_column, TaskKind kind,
                             const UtilityOptions& options) {
  if (original.schema.size() != synthetic.schema.size()) {
    throw SchemaMismatch("datasets have " + std::to_string(original.schema.size()) + " and " +
                         std::to_string(synthetic.schema.size()) + " columns");
  }
  if (target_column >= original.schema.size()) {
    throw SchemaMismatch("target column " + std::to_string(target_column) + " out of range");
  }
  UtilityMatrix matrix;
  matrix.models = options.models.empty() ? default_models(kind) : options.models;
  matrix.kind = kind == TaskKind::kClassification ? ScoreKind::kAccuracy : ScoreKind::kR2;
  if (kind == TaskKind::kRegression &&
      std::count(matrix.models.begin(), matrix.models.end(), UtilityModel::kNaiveBayes)) {
    throw ConfigError("naive Bayes is a classifier and cannot score a regression task");
  }

  const std::uint64_t split_seed = derive_seed(options.seed, {stream_id("utility-split")});
  const Prepared orig = prepare(original, target_column, options.train_fraction, split_seed);
  const Prepared synth = prepare(synthetic, target_column, options.train_fraction, split_seed);

  // Class indices follow the sorted union of observed target values.
  std::map<double, int> classes;
  if (kind == TaskKind::kClassification) {
    for (const Prepared* p : {&orig, &synth}) {
      for (const TaskData* t : {&p->train, &p->test}) {
        for (double v : t->y) classes.emplace(v, 0);
      }
    }
    int next = 0;
    for (auto& [value, index] : classes) index = next++;
  }

  ForestParams forest;
  forest.n_trees = options.forest_trees;
  forest.seed = derive_seed(options.seed, {stream_id("utility-forest")});

  auto run = [&](UtilityModel model, const TaskData& train,
                 const TaskData& test) -> std::vector<double> {
    if (kind == TaskKind::kRegression) {
      if (model == UtilityModel::kDecisionTree) {
        return DecisionTree::fit_regressor(train.x, train.y).predict(test.x);
      }
      return RandomForest::fit_regressor(train.x, train.y, forest).predict(test.x);
    }
    const std::vector<int> y = to_labels(train.y, classes);
    switch (model) {
      case UtilityModel::kDecisionTree:
        return DecisionTree::fit_classifier(train.x, y, classes.size()).predict(test.x);
      case UtilityModel::kRandomForest:
        return RandomForest::fit_classifier(train.x, y, classes.size(), forest).predict(test.x);
      case UtilityModel::kNaiveBayes:
        return GaussianNB::fit(train.x, y, classes.size()).predict(test.x);
    }
    return {};
  };

  for (UtilityModel model : matrix.models) {
    for (UtilityTask task : kAllUtilityTasks) {
      const bool train_orig =
          task == UtilityTask::kOriginal || task == UtilityTask::kTrainOriginalTestGenerated;
      const bool test_orig =
          task == UtilityTask::kOriginal || task == UtilityTask::kTrainGeneratedTestOriginal;
      const TaskData& train = train_orig ? orig.train : synth.train;
      const TaskData& test = test_orig ? orig.test : synth.test;
      UtilityCell cell;
      cell.model = model;
      cell.task = task;
      cell.kind = matrix.kind;
      try {
        const std::vector<double> pred = run(model, train, test);
        const std::vector<double> truth =
            kind == TaskKind::kClassification ? to_codes(test.y, classes) : test.y;
        cell.score = score(truth, pred, matrix.kind);
      } catch (const UndefinedScore& e) {
        cell.error = e.what();
      }
      matrix.cells.push_back(std::move(cell));
    }
  }
  return matrix;
}

PrivacyAudit privacy_audit(const Dataset& original, const Dataset& synthetic) {
  std::unordered_set<std::string> seen;
  seen.reserve(original.size());
  for (const RowRecord& r : original.rows) seen.insert(row_key(r));
  PrivacyAudit audit;
  for (std::size_t i = 0; i < synthetic.size(); ++i) {
    if (seen.count(row_key(synthetic.rows[i]))) audit.indices.push_back(i);
  }
  audit.duplicates = audit.indices.size();
  return audit;
}

EvaluationReport evaluate(const Dataset& original, const Dataset& synthetic,
                          std::size_t target_column, TaskKind kind,
                          const UtilityOptions& options) {
  EvaluationReport report;
  report.resemblance = resemblance(original, synthetic);
  report.target = original.schema[target_column].name;
  report.task_kind = kind;
  report.utility = utility_matrix(original, synthetic, target_column, kind, options);
  report.privacy = privacy_audit(original, synthetic);
  return report;
}

void write_report_text(std::ostream& out, const EvaluationReport& report) {
  const char* metric = report.utility.kind == ScoreKind::kR2 ? "r2" : "accuracy";
  out << "RESEMBLANCE\n";
  out << "Wasserstein-1 per feature on jointly min-max normalized data; aggregate is the "
         "unweighted mean over all features (categorical codes included)\n";
  std::size_t width = 9;
  for (const std::string& f : report.resemblance.features) width = std::max(width, f.size());
  for (std::size_t j = 0; j < report.resemblance.features.size(); ++j) {
    const std::string& f = report.resemblance.features[j];
    out << "  " << f << std::string(width - f.size() + 2, ' ')
        << fixed6(report.resemblance.distances[j]) << "\n";
  }
  out << "  aggregate" << std::string(width - 9 + 2, ' ') << fixed6(report.resemblance.aggregate)
      << "\n\n";

  out << "UTILITY\n";
  out << "target " << report.target << " (" << task_kind_name(report.task_kind) << ", " << metric
      << ")\n";
  out << "  model";
  for (UtilityTask t : kAllUtilityTasks) out << " | " << task_name(t);
  out << "\n";
  for (UtilityModel m : report.utility.models) {
    out << "  " << model_name(m);
    for (UtilityTask t : kAllUtilityTasks) {
      const UtilityCell& c = report.utility.at(m, t);
      out << " | " << (c.score ? fixed6(*c.score) : std::string("undefined"));
    }
    out << "\n";
  }
  out << "\n";

  out << "PRIVACY\n";
  out << "  exact duplicates of original rows: " << report.privacy.duplicates << "\n";
  if (!report.privacy.indices.empty()) {
    out << "  synthetic row indices:";
    for (std::size_t i : report.privacy.indices) out << " " << i;
    out << "\n";
  }
}

void write_report_csv(std::ostream& out, const EvaluationReport& report) {
  const char* metric = report.utility.kind == ScoreKind::kR2 ? "r2" : "accuracy";
  out << "section,subject,metric,value\n";
  for (std::size_t j = 0; j < report.resemblance.features.size(); ++j) {
    out << "resemblance," << report.resemblance.features[j] << ",wasserstein,"
        << format_number(report.resemblance.distances[j]) << "\n";
  }
  out << "resemblance,aggregate,wasserstein_mean," << format_number(report.resemblance.aggregate)
      << "\n";
  for (UtilityModel m : report.utility.models) {
    for (UtilityTask t : kAllUtilityTasks) {
      const UtilityCell& c = report.utility.at(m, t);
      out << "utility," << model_name(m) << "/" << task_csv_name(t) << "," << metric << ","
          << (c.score ? format_number(*c.score) : std::string("undefined")) << "\n";
    }
  }
  out << "privacy,all,exact_duplicates," << report.privacy.duplicates << "\n";
}

}  // namespace tabfuzz
