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

#ifndef TABFUZZ_ML_HPP_
#define TABFUZZ_ML_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "tabfuzz/constraints.hpp"

namespace tabfuzz {

// Dense row-major matrix of encoded features.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  FeatureMatrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  double at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  void append_row(std::span<const double> values);
  FeatureMatrix select_rows(std::span<const std::size_t> indices) const;
  std::vector<double> column(std::size_t j) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline constexpr std::size_t kNoLimit = std::numeric_limits<std::size_t>::max();

struct TreeParams {
  std::size_t max_depth = kNoLimit;
  std::size_t min_samples_leaf = 1;
  // Features examined per split; 0 means all of them.
  std::size_t max_features = 0;
};

enum class TreeTask { kClassification, kRegression };

// CART with Gini impurity (classification) or squared error (regression).
// Thresholds are midpoints between consecutive distinct values and a sample
// goes left when its value is <= threshold. Ties between equally good splits
// go to the lowest column, then the lowest threshold.
class DecisionTree final : public Classifier {
 public:
  struct Node {
    std::int32_t feature = -1;  // -1 for leaves
    double threshold = 0.0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::uint32_t samples = 0;
    // Majority class (lowest on ties) or mean target.
    double value = 0.0;
  };

  DecisionTree() = default;

  // Labels are class indices in [0, n_classes). `rng` is needed only when
  // params.max_features selects a subset of features.
  static DecisionTree fit_classifier(const FeatureMatrix& x, std::span<const int> y,
                                     std::size_t n_classes, const TreeParams& params = {},
                                     Rng* rng = nullptr);
  static DecisionTree fit_regressor(const FeatureMatrix& x, std::span<const double> y,
                                    const TreeParams& params = {}, Rng* rng = nullptr);

  TreeTask task() const { return task_; }
  std::size_t n_features() const { return n_features_; }
  std::size_t n_classes() const { return n_classes_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t depth() const;
  std::size_t leaf_count() const;

  // Class index or regression estimate. Throws std::invalid_argument on an
  // arity mismatch.
  double predict_value(std::span<const double> features) const;
  int predict_label(std::span<const double> features) const override;
  std::vector<double> predict(const FeatureMatrix& x) const;

  // Versioned line-oriented text; doubles are written in hex so the round
  // trip is exact on every platform.
  void save(std::ostream& out) const;
  static DecisionTree load(std::istream& in);

  bool operator==(const DecisionTree& other) const;

 private:
  friend class TreeBuilder;

  TreeTask task_ = TreeTask::kClassification;
  std::size_t n_features_ = 0;
  std::size_t n_classes_ = 0;
  std::vector<Node> nodes_;
};

struct ForestParams {
  std::size_t n_trees = 100;
  TreeParams tree;  // max_features 0 picks floor(sqrt(d)) or ceil(d/3) by task
  std::uint64_t seed = 0;
};

// Bagged trees with per-split feature subsampling. Classification takes a
// majority vote (lowest class on ties); regression averages.
class RandomForest final : public Classifier {
 public:
  static RandomForest fit_classifier(const FeatureMatrix& x, std::span<const int> y,
                                     std::size_t n_classes, const ForestParams& params);
  static RandomForest fit_regressor(const FeatureMatrix& x, std::span<const double> y,
                                    const ForestParams& params);

  const std::vector<DecisionTree>& trees() const { return trees_; }
  TreeTask task() const { return task_; }

  double predict_value(std::span<const double> features) const;
  int predict_label(std::span<const double> features) const override;
  std::vector<double> predict(const FeatureMatrix& x) const;

 private:
  TreeTask task_ = TreeTask::kClassification;
  std::size_t n_classes_ = 0;
  std::vector<DecisionTree> trees_;
};

inline constexpr double kVarianceFloor = 1e-9;

class GaussianNB final : public Classifier {
 public:
  static GaussianNB fit(const FeatureMatrix& x, std::span<const int> y, std::size_t n_classes);

  const std::vector<double>& priors() const { return priors_; }
  std::span<const double> means(std::size_t c) const { return {means_.data() + c * d_, d_}; }
  std::span<const double> variances(std::size_t c) const { return {vars_.data() + c * d_, d_}; }

  // log prior + sum of per-feature log densities; -inf for empty classes.
  double joint_log_likelihood(std::size_t c, std::span<const double> features) const;
  int predict_label(std::span<const double> features) const override;
  std::vector<double> predict(const FeatureMatrix& x) const;

 private:
  std::size_t d_ = 0;
  std::vector<double> priors_;
  std::vector<double> means_;
  std::vector<double> vars_;
  std::vector<double> inv_two_var_;
  std::vector<double> log_norm_;  // per class: log prior - 0.5 * sum log(2 pi var)
};

enum class ScoreKind { kAccuracy, kR2 };

// Fraction of exactly equal entries. Throws std::invalid_argument unless the
// inputs are equally long and nonempty.
double accuracy(std::span<const double> y_true, std::span<const double> y_pred);

// 1 - SS_res / SS_tot. Throws UndefinedScore for fewer than two samples or a
// constant y_true.
double r2_score(std::span<const double> y_true, std::span<const double> y_pred);

double score(std::span<const double> y_true, std::span<const double> y_pred, ScoreKind kind);

}  // namespace tabfuzz

#endif  // TABFUZZ_ML_HPP_
