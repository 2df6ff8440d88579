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

#ifndef TABFUZZ_ENCODING_HPP_
#define TABFUZZ_ENCODING_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "tabfuzz/row.hpp"

namespace tabfuzz {

// Maps rows to feature vectors: numeric cells pass through, categorical
// cells become their index in the grammar vocabulary. The same encoder serves
// the discriminator and every utility model.
class Encoder {
 public:
  Encoder() = default;
  explicit Encoder(ColumnSchema schema) : schema_(std::move(schema)) {}

  const ColumnSchema& schema() const { return schema_; }
  std::size_t width() const { return schema_.size(); }

  // Throws EncodingError for a missing cell, an unknown token, or a cell of
  // the wrong kind.
  double encode_cell(std::size_t column, const Cell& cell) const;
  std::vector<double> encode(const RowRecord& row) const;
  void encode_into(const RowRecord& row, std::span<double> out) const;

  // Inverse of encode_cell for values that encode_cell can produce.
  Cell decode_cell(std::size_t column, double value) const;

 private:
  ColumnSchema schema_;
};

}  // namespace tabfuzz

#endif  // TABFUZZ_ENCODING_HPP_
