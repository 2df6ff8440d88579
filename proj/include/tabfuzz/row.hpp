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

#ifndef TABFUZZ_ROW_HPP_
#define TABFUZZ_ROW_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tabfuzz/derivation.hpp"
#include "tabfuzz/grammar.hpp"

namespace tabfuzz {

// A missing cell, a number, or a categorical token.
using Cell = std::variant<std::monostate, double, std::string>;

inline bool is_missing(const Cell& c) { return std::holds_alternative<std::monostate>(c); }

struct RowRecord {
  std::vector<Cell> values;

  bool operator==(const RowRecord&) const = default;
};

enum class ColumnKind { kNumeric, kCategorical };

struct Column {
  std::string name;    // header name
  std::string symbol;  // grammar nonterminal, e.g. "<age>"
  ColumnKind kind = ColumnKind::kNumeric;
  // Grammar source order; never derived from data.
  std::vector<std::string> vocabulary;
  bool is_target = false;

  bool operator==(const Column&) const = default;
};

class ColumnSchema {
 public:
  ColumnSchema() = default;
  explicit ColumnSchema(std::vector<Column> columns) : columns_(std::move(columns)) {}

  const std::vector<Column>& columns() const { return columns_; }
  std::size_t size() const { return columns_.size(); }
  const Column& operator[](std::size_t i) const { return columns_[i]; }

  std::optional<std::size_t> index_of_symbol(std::string_view symbol) const;
  std::optional<std::size_t> index_of_name(std::string_view name) const;

  std::optional<std::size_t> target() const;
  // Marks `name` as the only target column. Throws SchemaMismatch if absent.
  ColumnSchema with_target(std::string_view name) const;

  std::vector<std::string> names() const;

  bool operator==(const ColumnSchema&) const = default;

 private:
  std::vector<Column> columns_;
};

// Columns are the nonterminals of the row production, in order; names come
// from the header production (split at commas) when one exists. A column
// whose alternatives are all single literals, at least one of them
// non-numeric, is categorical with those literals as vocabulary.
ColumnSchema schema_from_grammar(const Grammar& grammar);

// Flattens a row derivation into cells. Throws MalformedRow when a numeric
// column does not spell a finite number.
RowRecord tree_to_row(const DerivationTree& tree, const ColumnSchema& schema);

// Strict decimal parse of the whole string; nullopt unless finite.
std::optional<double> parse_number(std::string_view text);

// Integers print without a fraction; everything else uses the shortest
// round-trip representation.
std::string format_number(double value);

std::string format_cell(const Cell& cell);

// Comma-joined canonical cells.
std::string row_key(const RowRecord& row);

}  // namespace tabfuzz

#endif  // TABFUZZ_ROW_HPP_
