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

#ifndef TABFUZZ_EVALUATION_HPP_
#define TABFUZZ_EVALUATION_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tabfuzz/ml.hpp"
#include "tabfuzz/tabular.hpp"

namespace tabfuzz {

// 1-D Wasserstein-1 distance between the empirical distributions of `a` and
// `b`, i.e. the integral of |F_a^-1(q) - F_b^-1(q)| over q in [0, 1].
// Throws std::invalid_argument if either sample is empty.
double wasserstein_1d(std::span<const double> a, std::span<const double> b);

struct ResemblanceReport {
  std::vector<std::string> features;
  std::vector<double> distances;  // per feature, in [0, 1]
  double aggregate = 0.0;         // unweighted mean of `distances`
};

// Per-column distance after joint min-max normalization. Both datasets must
// be preprocessed and share a schema.
ResemblanceReport resemblance(const Dataset& original, const Dataset& synthetic);

enum class TaskKind { kClassification, kRegression };

std::string_view task_kind_name(TaskKind kind);
std::optional<TaskKind> parse_task_kind(std::string_view text);

enum class UtilityModel { kDecisionTree, kRandomForest, kNaiveBayes };
enum class UtilityTask {
  kOriginal,
  kGenerated,
  kTrainOriginalTestGenerated,
  kTrainGeneratedTestOriginal,
};

inline constexpr UtilityTask kAllUtilityTasks[] = {
    UtilityTask::kOriginal,
    UtilityTask::kGenerated,
    UtilityTask::kTrainOriginalTestGenerated,
    UtilityTask::kTrainGeneratedTestOriginal,
};

std::string_view model_name(UtilityModel model);
std::string_view task_name(UtilityTask task);       // "Original", "Generated", ...
std::string_view task_csv_name(UtilityTask task);   // "original", "generated", ...

// Tree, forest and naive Bayes for classification; tree and forest for
// regression.
std::vector<UtilityModel> default_models(TaskKind kind);

struct UtilityCell {
  UtilityModel model = UtilityModel::kDecisionTree;
  UtilityTask task = UtilityTask::kOriginal;
  ScoreKind kind = ScoreKind::kAccuracy;
  std::optional<double> score;  // empty when the score is undefined
  std::string error;
};

struct UtilityMatrix {
  std::vector<UtilityModel> models;
  ScoreKind kind = ScoreKind::kAccuracy;
  std::vector<UtilityCell> cells;  // model-major, tasks in kAllUtilityTasks order

  // Throws std::out_of_range for a model that was not evaluated.
  const UtilityCell& at(UtilityModel model, UtilityTask task) const;
};

struct UtilityOptions {
  std::vector<UtilityModel> models;  // empty selects default_models
  std::size_t forest_trees = 100;
  double train_fraction = 0.7;
  std::uint64_t seed = 0;
};

// Both datasets are split with the same seed, so the Original task and the
// Train Generated-Test Original task score on the same original test rows.
// Cross tasks train on one dataset's train share and test on the other's
// test share. Models use unlimited depth and leaves of one sample.
UtilityMatrix utility_matrix(const Dataset& original, const Dataset& synthetic,
                             std::size_t target_column, TaskKind kind,
                             const UtilityOptions& options = {});

struct PrivacyAudit {
  std::size_t duplicates = 0;
  std::vector<std::size_t> indices;  // synthetic rows equal to an original row
};

// Exact cell-by-cell equality on the preprocessed representation.
PrivacyAudit privacy_audit(const Dataset& original, const Dataset& synthetic);

struct EvaluationReport {
  ResemblanceReport resemblance;
  std::string target;
  TaskKind task_kind = TaskKind::kRegression;
  UtilityMatrix utility;
  PrivacyAudit privacy;
};

EvaluationReport evaluate(const Dataset& original, const Dataset& synthetic,
                          std::size_t target_column, TaskKind kind,
                          const UtilityOptions& options = {});

// Sections RESEMBLANCE, UTILITY and PRIVACY.
void write_report_text(std::ostream& out, const EvaluationReport& report);
// section,subject,metric,value lines.
void write_report_csv(std::ostream& out, const EvaluationReport& report);

}  // namespace tabfuzz

#endif  // TABFUZZ_EVALUATION_HPP_
