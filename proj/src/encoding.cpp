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

#include "tabfuzz/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tabfuzz/errors.hpp"

namespace tabfuzz {

double Encoder::encode_cell(std::size_t column, const Cell& cell) const {
  const Column& col = schema_[column];
  if (is_missing(cell)) throw EncodingError("missing value in column '" + col.name + "'");
  if (col.kind == ColumnKind::kNumeric) {
    if (const double* d = std::get_if<double>(&cell)) return *d;
    throw EncodingError("text '" + std::get<std::string>(cell) + "' in numeric column '" +
                        col.name + "'");
  }
  if (const std::string* s = std::get_if<std::string>(&cell)) {
    const auto it = std::find(col.vocabulary.begin(), col.vocabulary.end(), *s);
    if (it == col.vocabulary.end()) {
      throw EncodingError("unknown category '" + *s + "' in column '" + col.name + "'");
    }
    return static_cast<double>(it - col.vocabulary.begin());
  }
  // Already encoded: accept an in-range integer code.
  const double code = std::get<double>(cell);
  if (code >= 0 && code < static_cast<double>(col.vocabulary.size()) && code == std::floor(code)) {
    return code;
  }
  throw EncodingError("code " + format_number(code) + " out of range for column '" + col.name +
                      "'");
}

std::vector<double> Encoder::encode(const RowRecord& row) const {
  std::vector<double> out(width());
  encode_into(row, out);
  return out;
}

void Encoder::encode_into(const RowRecord& row, std::span<double> out) const {
  if (row.values.size() != width() || out.size() != width()) {
    throw EncodingError("row has " + std::to_string(row.values.size()) + " cells, schema has " +
                        std::to_string(width()));
  }
  for (std::size_t i = 0; i < width(); ++i) out[i] = encode_cell(i, row.values[i]);
}

Cell Encoder::decode_cell(std::size_t column, double value) const {
  const Column& col = schema_[column];
  if (col.kind == ColumnKind::kNumeric) return value;
  const auto idx = static_cast<std::size_t>(value);
  if (value < 0 || idx >= col.vocabulary.size() || static_cast<double>(idx) != value) {
    throw EncodingError("code " + format_number(value) + " out of range for column '" + col.name +
                        "'");
  }
  return col.vocabulary[idx];
}

}  // namespace tabfuzz
