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

#ifndef TABFUZZ_TABULAR_HPP_
#define TABFUZZ_TABULAR_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tabfuzz/ml.hpp"
#include "tabfuzz/row.hpp"

namespace tabfuzz {

enum class Provenance { kOriginal, kSynthetic };

struct Dataset {
  ColumnSchema schema;
  std::vector<RowRecord> rows;
  Provenance provenance = Provenance::kOriginal;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
};

// Cells equal to one of these (after trimming) load as missing.
const std::vector<std::string>& default_missing_markers();

// Comma-separated, header first, cells trimmed of surrounding blanks. The
// header must list the schema names in order. Numeric cells that do not parse
// are loaded as missing. Throws HeaderMismatch (including for an empty file)
// and MalformedRow for a row with the wrong number of cells.
Dataset parse_csv(std::string_view text, const ColumnSchema& schema,
                  Provenance provenance = Provenance::kOriginal,
                  const std::vector<std::string>& missing_markers = default_missing_markers());
Dataset load_csv(const std::filesystem::path& path, const ColumnSchema& schema,
                 Provenance provenance = Provenance::kOriginal,
                 const std::vector<std::string>& missing_markers = default_missing_markers());

// Header plus one line per row; categorical codes are written as tokens.
void write_csv(std::ostream& out, const Dataset& data);
std::string to_csv(const Dataset& data);

// Drops rows with a missing cell, replaces categorical tokens by their
// vocabulary index and removes repeated rows, keeping first occurrences.
// Throws UnknownCategory for a token outside the vocabulary.
Dataset preprocess(const Dataset& data);

// Seeded uniform shuffle, then the first floor(n * train_fraction) rows
// (at least 1, at most n - 1) train and the rest test. Throws TooSmall for
// fewer than two rows.
std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction, std::uint64_t seed);

// Same shuffle as split, as row indices.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n, double train_fraction, std::uint64_t seed);

Dataset subset(const Dataset& data, const std::vector<std::size_t>& indices);

// Encoded features of every column.
FeatureMatrix to_matrix(const Dataset& data);

// Encoded features with the target column held out, plus the target.
struct TaskData {
  FeatureMatrix x;
  std::vector<double> y;
};
TaskData to_task(const Dataset& data, std::size_t target_column);

// Min-max scaling with bounds taken over both datasets per column; constant
// columns map to 0.
std::pair<FeatureMatrix, FeatureMatrix> normalize(const Dataset& a, const Dataset& b);

}  // namespace tabfuzz

#endif  // TABFUZZ_TABULAR_HPP_
