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

#include "tabfuzz/ml.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tabfuzz/errors.hpp"
#include "tabfuzz/kernels.hpp"

namespace tabfuzz {

FeatureMatrix::FeatureMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

void FeatureMatrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) throw std::invalid_argument("row width mismatch");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> indices) const {
  FeatureMatrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(indices[i] * cols_), cols_,
                out.data_.begin() + static_cast<std::ptrdiff_t>(i * cols_));
  }
  return out;
}

std::vector<double> FeatureMatrix::column(std::size_t j) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = at(i, j);
  return out;
}

class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& x, TreeTask task, std::span<const int> labels,
              std::span<const double> targets, std::size_t n_classes, const TreeParams& params,
              Rng* rng)
      : x_(x), task_(task), labels_(labels), targets_(targets), k_(n_classes), params_(params),
        rng_(rng) {}

  DecisionTree build(std::vector<std::size_t> samples) {
    if (samples.empty()) throw std::invalid_argument("cannot fit a tree on no data");
    tree_.task_ = task_;
    tree_.n_features_ = x_.cols();
    tree_.n_classes_ = k_;
    grow(samples, 0);
    return std::move(tree_);
  }

 private:
  struct Split {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double score = 0.0;
  };

  std::uint32_t grow(std::vector<std::size_t>& samples, std::size_t depth) {
    const auto id = static_cast<std::uint32_t>(tree_.nodes_.size());
    tree_.nodes_.emplace_back();
    const std::size_t n = samples.size();
    double parent = 0.0;
    bool pure = true;
    if (task_ == TreeTask::kClassification) {
      std::vector<double> counts(k_, 0.0);
      for (std::size_t s : samples) counts[static_cast<std::size_t>(labels_[s])] += 1.0;
      std::size_t best = 0;
      std::size_t nonzero = 0;
      double sq = 0.0;
      for (std::size_t c = 0; c < k_; ++c) {
        if (counts[c] > counts[best]) best = c;
        if (counts[c] > 0) ++nonzero;
        sq += counts[c] * counts[c];
      }
      tree_.nodes_[id].value = static_cast<double>(best);
      pure = nonzero <= 1;
      parent = static_cast<double>(n) - sq / static_cast<double>(n);
    } else {
      double s = 0.0, q = 0.0;
      const double first = targets_[samples.front()];
      for (std::size_t i : samples) {
        s += targets_[i];
        q += targets_[i] * targets_[i];
        pure = pure && targets_[i] == first;
      }
      tree_.nodes_[id].value = s / static_cast<double>(n);
      parent = q - s * s / static_cast<double>(n);
    }
    tree_.nodes_[id].samples = static_cast<std::uint32_t>(n);

    if (pure || depth >= params_.max_depth || n < 2 * std::max<std::size_t>(1, params_.min_samples_leaf)) {
      return id;
    }
    const Split split = best_split(samples, parent);
    if (!split.found) return id;

    std::vector<std::size_t> left, right;
    left.reserve(n);
    right.reserve(n);
    for (std::size_t s : samples) {
      (x_.at(s, split.feature) <= split.threshold ? left : right).push_back(s);
    }
    std::vector<std::size_t>().swap(samples);
    const std::uint32_t l = grow(left, depth + 1);
    const std::uint32_t r = grow(right, depth + 1);
    DecisionTree::Node& node = tree_.nodes_[id];
    node.feature = static_cast<std::int32_t>(split.feature);
    node.threshold = split.threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  std::vector<std::size_t> candidate_features() {
    const std::size_t d = x_.cols();
    std::vector<std::size_t> features(d);
    for (std::size_t j = 0; j < d; ++j) features[j] = j;
    const std::size_t m = params_.max_features;
    if (m == 0 || m >= d) return features;
    if (!rng_) throw std::invalid_argument("feature subsampling needs a random source");
    for (std::size_t i = 0; i < m; ++i) {
      std::swap(features[i], features[i + rng_->uniform_index(d - i)]);
    }
    features.resize(m);
    std::sort(features.begin(), features.end());
    return features;
  }

  Split best_split(const std::vector<std::size_t>& samples, double parent) {
    const std::size_t n = samples.size();
    const std::size_t min_leaf = std::max<std::size_t>(1, params_.min_samples_leaf);
    const double eps = 1e-12 * std::max(1.0, std::fabs(parent));
    Split best;
    order_.assign(samples.begin(), samples.end());
    scores_.resize(n - 1);
    for (std::size_t j : candidate_features()) {
      std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
        const double va = x_.at(a, j), vb = x_.at(b, j);
        return va < vb || (va == vb && a < b);
      });
      if (x_.at(order_.front(), j) == x_.at(order_.back(), j)) continue;
      score_positions(n);
      for (std::size_t t = min_leaf - 1; t + min_leaf < n; ++t) {
        const double v = x_.at(order_[t], j);
        const double w = x_.at(order_[t + 1], j);
        if (!(v < w)) continue;
        const double mid = 0.5 * (v + w);
        if (!(v < mid && mid < w)) continue;
        if (!best.found || scores_[t] < best.score - eps) {
          best = {true, j, mid, scores_[t]};
        }
      }
    }
    return best;
  }

  // scores_[t] is the impurity of splitting after sorted position t.
  void score_positions(std::size_t n) {
    if (task_ == TreeTask::kClassification) {
      prefix_.assign(k_ * n, 0.0);
      totals_.assign(k_, 0.0);
      for (std::size_t t = 0; t < n; ++t) {
        totals_[static_cast<std::size_t>(labels_[order_[t]])] += 1.0;
        for (std::size_t c = 0; c < k_; ++c) prefix_[c * n + t] = totals_[c];
      }
      kernels::gini_split_scores(prefix_, totals_, n, scores_);
    } else {
      prefix_.resize(n);
      prefix_sq_.resize(n);
      double s = 0.0, q = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        const double y = targets_[order_[t]];
        s += y;
        q += y * y;
        prefix_[t] = s;
        prefix_sq_[t] = q;
      }
      kernels::sse_split_scores(prefix_, prefix_sq_, s, q, scores_);
    }
  }

  const FeatureMatrix& x_;
  TreeTask task_;
  std::span<const int> labels_;
  std::span<const double> targets_;
  std::size_t k_;
  TreeParams params_;
  Rng* rng_;
  DecisionTree tree_;
  std::vector<std::size_t> order_;
  std::vector<double> prefix_, prefix_sq_, totals_, scores_;
};

namespace {

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

void check_labels(const FeatureMatrix& x, std::span<const int> y, std::size_t n_classes) {
  if (x.rows() != y.size()) throw std::invalid_argument("feature and label counts differ");
  for (int label : y) {
    if (label < 0 || static_cast<std::size_t>(label) >= n_classes) {
      throw std::invalid_argument("label " + std::to_string(label) + " out of range");
    }
  }
}

std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double unhex(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw Error("bad number in model file: '" + s + "'");
  return v;
}

constexpr std::string_view kTreeMagic = "tabfuzz-tree";
constexpr int kTreeVersion = 1;

}  // namespace

DecisionTree DecisionTree::fit_classifier(const FeatureMatrix& x, std::span<const int> y,
                                          std::size_t n_classes, const TreeParams& params,
                                          Rng* rng) {
  check_labels(x, y, n_classes);
  return TreeBuilder(x, TreeTask::kClassification, y, {}, n_classes, params, rng)
      .build(all_rows(x.rows()));
}

DecisionTree DecisionTree::fit_regressor(const FeatureMatrix& x, std::span<const double> y,
                                         const TreeParams& params, Rng* rng) {
  if (x.rows() != y.size()) throw std::invalid_argument("feature and target counts differ");
  return TreeBuilder(x, TreeTask::kRegression, {}, y, 0, params, rng).build(all_rows(x.rows()));
}

std::size_t DecisionTree::depth() const {
  if (nodes_.empty()) return 0;
  std::vector<std::pair<std::uint32_t, std::size_t>> stack = {{0, 0}};
  std::size_t best = 0;
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (nodes_[id].feature >= 0) {
      stack.emplace_back(nodes_[id].left, d + 1);
      stack.emplace_back(nodes_[id].right, d + 1);
    }
  }
  return best;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.feature < 0; }));
}

double DecisionTree::predict_value(std::span<const double> features) const {
  if (features.size() != n_features_) {
    throw std::invalid_argument("expected " + std::to_string(n_features_) + " features, got " +
                                std::to_string(features.size()));
  }
  if (nodes_.empty()) throw std::logic_error("tree is not fitted");
  std::uint32_t id = 0;
  while (nodes_[id].feature >= 0) {
    const Node& node = nodes_[id];
    id = features[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
  }
  return nodes_[id].value;
}

int DecisionTree::predict_label(std::span<const double> features) const {
  return static_cast<int>(predict_value(features));
}

std::vector<double> DecisionTree::predict(const FeatureMatrix& x) const {
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict_value(x.row(i));
  return out;
}

void DecisionTree::save(std::ostream& out) const {
  out << kTreeMagic << ' ' << kTreeVersion << '\n'
      << "task " << (task_ == TreeTask::kClassification ? "classification" : "regression") << '\n'
      << "features " << n_features_ << '\n'
      << "classes " << n_classes_ << '\n'
      << "nodes " << nodes_.size() << '\n';
  for (const Node& n : nodes_) {
    out << n.feature << ' ' << hex(n.threshold) << ' ' << n.left << ' ' << n.right << ' '
        << n.samples << ' ' << hex(n.value) << '\n';
  }
}

DecisionTree DecisionTree::load(std::istream& in) {
  auto expect = [&](std::string_view key) {
    std::string word;
    if (!(in >> word) || word != key) {
      throw Error("model file: expected '" + std::string(key) + "', got '" + word + "'");
    }
  };
  DecisionTree tree;
  int version = 0;
  expect(kTreeMagic);
  if (!(in >> version) || version != kTreeVersion) {
    throw Error("model file: unsupported version " + std::to_string(version));
  }
  std::string task;
  expect("task");
  in >> task;
  if (task == "classification") {
    tree.task_ = TreeTask::kClassification;
  } else if (task == "regression") {
    tree.task_ = TreeTask::kRegression;
  } else {
    throw Error("model file: unknown task '" + task + "'");
  }
  std::size_t count = 0;
  expect("features");
  in >> tree.n_features_;
  expect("classes");
  in >> tree.n_classes_;
  expect("nodes");
  in >> count;
  if (!in) throw Error("model file: truncated header");
  tree.nodes_.resize(count);
  for (Node& n : tree.nodes_) {
    std::string threshold, value;
    if (!(in >> n.feature >> threshold >> n.left >> n.right >> n.samples >> value)) {
      throw Error("model file: truncated node list");
    }
    n.threshold = unhex(threshold);
    n.value = unhex(value);
    if (n.feature >= 0 && (n.left >= count || n.right >= count ||
                           static_cast<std::size_t>(n.feature) >= tree.n_features_)) {
      throw Error("model file: node refers outside the tree");
    }
  }
  return tree;
}

bool DecisionTree::operator==(const DecisionTree& other) const {
  if (task_ != other.task_ || n_features_ != other.n_features_ ||
      n_classes_ != other.n_classes_ || nodes_.size() != other.nodes_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& a = nodes_[i];
    const Node& b = other.nodes_[i];
    if (a.feature != b.feature || a.threshold != b.threshold || a.left != b.left ||
        a.right != b.right || a.samples != b.samples || a.value != b.value) {
      return false;
    }
  }
  return true;
}

namespace {

template <typename Fit>
std::vector<DecisionTree> grow_forest(std::size_t n_rows, const ForestParams& params, Fit fit) {
  if (params.n_trees == 0) throw std::invalid_argument("a forest needs at least one tree");
  if (n_rows == 0) throw std::invalid_argument("cannot fit a forest on no data");
  std::vector<DecisionTree> trees;
  trees.reserve(params.n_trees);
  for (std::size_t b = 0; b < params.n_trees; ++b) {
    Rng rng(derive_seed(params.seed, {stream_id("forest"), b}));
    std::vector<std::size_t> bag(n_rows);
    for (std::size_t& i : bag) i = rng.uniform_index(n_rows);
    trees.push_back(fit(std::move(bag), rng));
  }
  return trees;
}

TreeParams forest_tree_params(const ForestParams& params, std::size_t d, TreeTask task) {
  TreeParams tp = params.tree;
  if (tp.max_features == 0) {
    const std::size_t m = task == TreeTask::kClassification
                              ? static_cast<std::size_t>(std::sqrt(static_cast<double>(d)))
                              : (d + 2) / 3;
    tp.max_features = std::max<std::size_t>(1, m);
  }
  return tp;
}

}  // namespace

RandomForest RandomForest::fit_classifier(const FeatureMatrix& x, std::span<const int> y,
                                          std::size_t n_classes, const ForestParams& params) {
  check_labels(x, y, n_classes);
  const TreeParams tp = forest_tree_params(params, x.cols(), TreeTask::kClassification);
  RandomForest forest;
  forest.task_ = TreeTask::kClassification;
  forest.n_classes_ = n_classes;
  forest.trees_ = grow_forest(x.rows(), params, [&](std::vector<std::size_t> bag, Rng& rng) {
    return TreeBuilder(x, TreeTask::kClassification, y, {}, n_classes, tp, &rng).build(std::move(bag));
  });
  return forest;
}

RandomForest RandomForest::fit_regressor(const FeatureMatrix& x, std::span<const double> y,
                                         const ForestParams& params) {
  if (x.rows() != y.size()) throw std::invalid_argument("feature and target counts differ");
  const TreeParams tp = forest_tree_params(params, x.cols(), TreeTask::kRegression);
  RandomForest forest;
  forest.task_ = TreeTask::kRegression;
  forest.trees_ = grow_forest(x.rows(), params, [&](std::vector<std::size_t> bag, Rng& rng) {
    return TreeBuilder(x, TreeTask::kRegression, {}, y, 0, tp, &rng).build(std::move(bag));
  });
  return forest;
}

double RandomForest::predict_value(std::span<const double> features) const {
  if (task_ == TreeTask::kRegression) {
    double s = 0.0;
    for (const DecisionTree& t : trees_) s += t.predict_value(features);
    return s / static_cast<double>(trees_.size());
  }
  return static_cast<double>(predict_label(features));
}

int RandomForest::predict_label(std::span<const double> features) const {
  if (task_ == TreeTask::kRegression) return static_cast<int>(predict_value(features));
  std::vector<std::size_t> votes(n_classes_, 0);
  for (const DecisionTree& t : trees_) ++votes[static_cast<std::size_t>(t.predict_label(features))];
  return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

std::vector<double> RandomForest::predict(const FeatureMatrix& x) const {
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict_value(x.row(i));
  return out;
}

GaussianNB GaussianNB::fit(const FeatureMatrix& x, std::span<const int> y, std::size_t n_classes) {
  check_labels(x, y, n_classes);
  if (x.rows() == 0) throw std::invalid_argument("cannot fit naive Bayes on no data");
  GaussianNB nb;
  const std::size_t d = x.cols();
  nb.d_ = d;
  nb.priors_.assign(n_classes, 0.0);
  nb.means_.assign(n_classes * d, 0.0);
  nb.vars_.assign(n_classes * d, 0.0);
  std::vector<double> counts(n_classes, 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto c = static_cast<std::size_t>(y[i]);
    counts[c] += 1.0;
    for (std::size_t j = 0; j < d; ++j) nb.means_[c * d + j] += x.at(i, j);
  }
  for (std::size_t c = 0; c < n_classes; ++c) {
    nb.priors_[c] = counts[c] / static_cast<double>(x.rows());
    for (std::size_t j = 0; j < d; ++j) {
      if (counts[c] > 0) nb.means_[c * d + j] /= counts[c];
    }
  }
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto c = static_cast<std::size_t>(y[i]);
    for (std::size_t j = 0; j < d; ++j) {
      const double dev = x.at(i, j) - nb.means_[c * d + j];
      nb.vars_[c * d + j] += dev * dev;
    }
  }
  nb.inv_two_var_.resize(n_classes * d);
  nb.log_norm_.assign(n_classes, 0.0);
  for (std::size_t c = 0; c < n_classes; ++c) {
    double log_norm = std::log(nb.priors_[c]);
    for (std::size_t j = 0; j < d; ++j) {
      double& v = nb.vars_[c * d + j];
      v = counts[c] > 0 ? v / counts[c] : 0.0;
      v = std::max(v, kVarianceFloor);
      nb.inv_two_var_[c * d + j] = 0.5 / v;
      log_norm -= 0.5 * std::log(2.0 * std::numbers::pi * v);
    }
    nb.log_norm_[c] = log_norm;
  }
  return nb;
}

double GaussianNB::joint_log_likelihood(std::size_t c, std::span<const double> features) const {
  if (features.size() != d_) {
    throw std::invalid_argument("expected " + std::to_string(d_) + " features, got " +
                                std::to_string(features.size()));
  }
  if (priors_[c] == 0.0) return -std::numeric_limits<double>::infinity();
  return log_norm_[c] - kernels::weighted_sq_diff_sum(features, means(c),
                                                      {inv_two_var_.data() + c * d_, d_});
}

int GaussianNB::predict_label(std::span<const double> features) const {
  std::size_t best = 0;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < priors_.size(); ++c) {
    const double ll = joint_log_likelihood(c, features);
    if (ll > best_ll) {
      best_ll = ll;
      best = c;
    }
  }
  return static_cast<int>(best);
}

std::vector<double> GaussianNB::predict(const FeatureMatrix& x) const {
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict_label(x.row(i));
  return out;
}

double accuracy(std::span<const double> y_true, std::span<const double> y_pred) {
  if (y_true.size() != y_pred.size() || y_true.empty()) {
    throw std::invalid_argument("accuracy needs equally long nonempty inputs");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) hits += y_true[i] == y_pred[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(y_true.size());
}

double r2_score(std::span<const double> y_true, std::span<const double> y_pred) {
  if (y_true.size() != y_pred.size()) throw std::invalid_argument("r2 inputs differ in length");
  if (y_true.size() < 2) throw UndefinedScore("r2 needs at least two samples");
  double total = 0.0;
  for (double v : y_true) total += v;
  // Same kernel for both sums, so predicting the mean gives exactly 0.
  const std::vector<double> mean(y_true.size(), total / static_cast<double>(y_true.size()));
  const double ss_tot = kernels::sq_diff_sum(y_true, mean);
  if (ss_tot == 0.0) throw UndefinedScore("r2 is undefined for a constant target");
  return 1.0 - kernels::sq_diff_sum(y_true, y_pred) / ss_tot;
}

double score(std::span<const double> y_true, std::span<const double> y_pred, ScoreKind kind) {
  return kind == ScoreKind::kAccuracy ? accuracy(y_true, y_pred) : r2_score(y_true, y_pred);
}

}  // namespace tabfuzz
