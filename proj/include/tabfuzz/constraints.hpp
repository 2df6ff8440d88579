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

// Static row constraints and the discriminator constraint.
//
// A `where` clause is a boolean expression over column references:
//
//   int(<age>) > 18 & int(<age>) < 70
//   float(<bmi>) >= 16.5 and (<smoker> == 'yes' or int(<age>) < 40)
//
// Comparisons are < > <= >= == = != (also written <>). `&`, `and`, `|` and
// `or` combine them; `&` binds tighter than `|`. A bare reference compares
// its cell as is; int() truncates and float() coerces to a number.
//
// Each top-level conjunct of a clause is compiled into its own constraint,
// so near misses on one conjunct are visible in the fitness score.

#ifndef TABFUZZ_CONSTRAINTS_HPP_
#define TABFUZZ_CONSTRAINTS_HPP_

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tabfuzz/encoding.hpp"
#include "tabfuzz/grammar.hpp"
#include "tabfuzz/row.hpp"

namespace tabfuzz {

struct Expr;

class StaticConstraint {
 public:
  StaticConstraint(std::shared_ptr<const Expr> root, std::size_t line);

  // Canonical source form, e.g. "int(<age>) > 18".
  const std::string& text() const { return text_; }
  std::size_t line() const { return line_; }
  const std::vector<std::string>& references() const { return references_; }
  const Expr& root() const { return *root_; }

 private:
  std::shared_ptr<const Expr> root_;
  std::string text_;
  std::size_t line_;
  std::vector<std::string> references_;
};

// Compiles one clause. Throws SyntaxError, or UndefinedNonterminal when a
// reference is not a nonterminal of `grammar`.
std::vector<StaticConstraint> compile_constraint(const Grammar& grammar, std::string_view text,
                                                 std::size_t line = 0);

// All clauses of the grammar's where block.
std::vector<StaticConstraint> compile_constraints(const Grammar& grammar);

// Throws SchemaMismatch when a referenced symbol is not a column, and
// MalformedRow when a cell cannot be coerced as the expression requires.
bool eval_static(const StaticConstraint& constraint, const RowRecord& row,
                 const ColumnSchema& schema);

// 1 when satisfied; otherwise a near-miss credit in [0, 1]. A failed numeric
// comparison x op c earns 1 / (1 + |x - c| / max(1, |c|)); a failed `!=`
// earns 0.5 and a failed text comparison 0. `or` takes the best operand,
// `and` the mean.
double static_credit(const StaticConstraint& constraint, const RowRecord& row,
                     const ColumnSchema& schema);

inline constexpr int kOriginalLabel = 0;
inline constexpr int kSyntheticLabel = 1;

// A frozen model that labels encoded rows.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual int predict_label(std::span<const double> features) const = 0;
};

// Classifier that always answers `label`.
class ConstantClassifier final : public Classifier {
 public:
  explicit ConstantClassifier(int label) : label_(label) {}
  int predict_label(std::span<const double>) const override { return label_; }

 private:
  int label_;
};

struct ClassifierConstraint {
  std::shared_ptr<const Classifier> model;
  int target = kOriginalLabel;
};

// Throws EncodingError when the row cannot be encoded.
bool eval_classifier(const ClassifierConstraint& constraint, const RowRecord& row,
                     const Encoder& encoder);

struct FitnessScore {
  double value = 0.0;
  bool all_satisfied = false;
};

// Mean credit over the static constraints and the classifier, which counts
// as one constraint with no partial credit. Equals 1 exactly when every
// constraint holds.
FitnessScore fitness(const RowRecord& row, std::span<const StaticConstraint> statics,
                     const ClassifierConstraint* classifier, const Encoder& encoder);

// Statics plus an optional classifier, bound to an encoder.
class ConstraintSet {
 public:
  ConstraintSet(std::vector<StaticConstraint> statics, std::optional<ClassifierConstraint> classifier,
                Encoder encoder)
      : statics_(std::move(statics)), classifier_(std::move(classifier)), encoder_(std::move(encoder)) {}

  const std::vector<StaticConstraint>& statics() const { return statics_; }
  const std::optional<ClassifierConstraint>& classifier() const { return classifier_; }
  const Encoder& encoder() const { return encoder_; }
  const ColumnSchema& schema() const { return encoder_.schema(); }

  FitnessScore score(const RowRecord& row) const {
    return fitness(row, statics_, classifier_ ? &*classifier_ : nullptr, encoder_);
  }
  bool statics_hold(const RowRecord& row) const;

  ConstraintSet with_classifier(std::optional<ClassifierConstraint> classifier) const {
    return ConstraintSet(statics_, std::move(classifier), encoder_);
  }

 private:
  std::vector<StaticConstraint> statics_;
  std::optional<ClassifierConstraint> classifier_;
  Encoder encoder_;
};

}  // namespace tabfuzz

#endif  // TABFUZZ_CONSTRAINTS_HPP_
