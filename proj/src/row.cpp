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

#include "tabfuzz/row.hpp"

#include <charconv>
#include <cctype>
#include <cmath>

#include "tabfuzz/errors.hpp"

namespace tabfuzz {
namespace {

std::string trimmed(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

// The single string a production spells, if it has one alternative made of
// plain literals.
std::optional<std::string> fixed_spelling(const Grammar& g, const std::string& symbol) {
  const std::vector<Alternative>& alts = g.alternatives(symbol);
  if (alts.size() != 1) return std::nullopt;
  std::string out;
  for (const Item& item : alts.front().items) {
    if (item.kind != Item::Kind::kTerminal || item.repetition != Repetition::kOnce) {
      return std::nullopt;
    }
    out += item.text;
  }
  return out;
}

}  // namespace

std::optional<std::size_t> ColumnSchema::index_of_symbol(std::string_view symbol) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].symbol == symbol) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> ColumnSchema::index_of_name(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> ColumnSchema::target() const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].is_target) return i;
  }
  return std::nullopt;
}

ColumnSchema ColumnSchema::with_target(std::string_view name) const {
  const std::optional<std::size_t> idx = index_of_name(name);
  if (!idx) throw SchemaMismatch("no column named '" + std::string(name) + "'");
  std::vector<Column> cols = columns_;
  for (std::size_t i = 0; i < cols.size(); ++i) cols[i].is_target = (i == *idx);
  return ColumnSchema(std::move(cols));
}

std::vector<std::string> ColumnSchema::names() const {
  std::vector<std::string> out;
  out.reserve(columns_.size());
  for (const Column& c : columns_) out.push_back(c.name);
  return out;
}

ColumnSchema schema_from_grammar(const Grammar& grammar) {
  const std::string& row = grammar.row_symbol();
  const std::vector<Alternative>& alts = grammar.alternatives(row);
  if (alts.size() != 1) {
    throw SchemaMismatch(row + " must have exactly one alternative to define columns");
  }
  std::vector<Column> columns;
  for (const Item& item : alts.front().items) {
    if (item.repetition != Repetition::kOnce || item.kind == Item::Kind::kGroup) {
      throw SchemaMismatch(row + " may only contain column nonterminals and separator literals");
    }
    if (item.kind != Item::Kind::kNonterminal) continue;
    Column col;
    col.symbol = item.text;
    col.name = item.text.substr(1, item.text.size() - 2);
    bool all_literals = true;
    bool any_text = false;
    for (const Alternative& a : grammar.alternatives(item.text)) {
      if (a.items.size() != 1 || a.items.front().kind != Item::Kind::kTerminal ||
          a.items.front().repetition != Repetition::kOnce) {
        all_literals = false;
        break;
      }
      col.vocabulary.push_back(a.items.front().text);
      if (!parse_number(a.items.front().text)) any_text = true;
    }
    if (all_literals && any_text) {
      col.kind = ColumnKind::kCategorical;
    } else {
      col.kind = ColumnKind::kNumeric;
      col.vocabulary.clear();
    }
    columns.push_back(std::move(col));
  }
  if (columns.empty()) throw SchemaMismatch(row + " defines no columns");

  if (grammar.has_nonterminal("<header>")) {
    const std::optional<std::string> header = fixed_spelling(grammar, "<header>");
    if (!header) throw SchemaMismatch("<header> must spell a single fixed string");
    std::vector<std::string> names;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = header->find(',', start);
      names.push_back(trimmed(std::string_view(*header).substr(start, comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (names.size() != columns.size()) {
      throw SchemaMismatch("<header> names " + std::to_string(names.size()) + " columns but " +
                           row + " has " + std::to_string(columns.size()));
    }
    for (std::size_t i = 0; i < names.size(); ++i) columns[i].name = names[i];
  }
  return ColumnSchema(std::move(columns));
}

RowRecord tree_to_row(const DerivationTree& tree, const ColumnSchema& schema) {
  if (tree.kind != DerivationTree::Kind::kNonterminal) throw MalformedRow("row tree must be rooted at a nonterminal");
  RowRecord row;
  row.values.reserve(schema.size());
  std::string text;
  for (const DerivationTree& child : tree.children) {
    if (child.kind == DerivationTree::Kind::kTerminal) continue;  // separator
    const std::size_t col = row.values.size();
    if (col >= schema.size()) throw MalformedRow("row has more columns than the schema");
    if (child.kind != DerivationTree::Kind::kNonterminal || child.symbol != schema[col].symbol) {
      throw MalformedRow("expected " + schema[col].symbol + " at column " + std::to_string(col));
    }
    text.clear();
    child.append_to(text);
    if (schema[col].kind == ColumnKind::kNumeric) {
      const std::optional<double> v = parse_number(text);
      if (!v) {
        throw MalformedRow("column '" + schema[col].name + "' is not numeric: '" + text + "'");
      }
      row.values.emplace_back(*v);
    } else {
      row.values.emplace_back(text);
    }
  }
  if (row.values.size() != schema.size()) {
    throw MalformedRow("row has " + std::to_string(row.values.size()) + " columns, expected " +
                       std::to_string(schema.size()));
  }
  return row;
}

std::optional<double> parse_number(std::string_view text) {
  if (text.empty()) return std::nullopt;
  double v = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[64];
  if (std::fabs(value) < 1e15 && value == std::trunc(value)) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, static_cast<long long>(value));
    return std::string(buf, ptr);
  }
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string format_cell(const Cell& cell) {
  if (const double* d = std::get_if<double>(&cell)) return format_number(*d);
  if (const std::string* s = std::get_if<std::string>(&cell)) return *s;
  return "";
}

std::string row_key(const RowRecord& row) {
  std::string key;
  for (std::size_t i = 0; i < row.values.size(); ++i) {
    if (i) key += ',';
    key += format_cell(row.values[i]);
  }
  return key;
}

}  // namespace tabfuzz
