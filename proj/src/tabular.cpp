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

#include "tabfuzz/tabular.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "tabfuzz/encoding.hpp"
#include "tabfuzz/errors.hpp"
#include "tabfuzz/kernels.hpp"
#include "tabfuzz/rng.hpp"

namespace tabfuzz {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += parts[i];
  }
  return out;
}

}  // namespace

const std::vector<std::string>& default_missing_markers() {
  static const std::vector<std::string> markers = {"", "?", "NA"};
  return markers;
}

Dataset parse_csv(std::string_view text, const ColumnSchema& schema, Provenance provenance,
                  const std::vector<std::string>& missing_markers) {
  Dataset data;
  data.schema = schema;
  data.provenance = provenance;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header_seen) {
      std::vector<std::string> names;
      for (std::string_view cell : split_cells(line)) names.emplace_back(cell);
      if (names != schema.names()) {
        throw HeaderMismatch("header '" + join(names) + "' does not match expected '" +
                             join(schema.names()) + "'");
      }
      header_seen = true;
      continue;
    }
    if (trim(line).empty()) continue;
    const std::vector<std::string_view> cells = split_cells(line);
    if (cells.size() != schema.size()) {
      throw MalformedRow("line " + std::to_string(line_no) + ": " + std::to_string(cells.size()) +
                         " cells, expected " + std::to_string(schema.size()));
    }
    RowRecord row;
    row.values.reserve(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::string_view cell = cells[i];
      if (std::find(missing_markers.begin(), missing_markers.end(), cell) != missing_markers.end()) {
        row.values.emplace_back(std::monostate{});
      } else if (schema[i].kind == ColumnKind::kNumeric) {
        const std::optional<double> v = parse_number(cell);
        if (v) {
          row.values.emplace_back(*v);
        } else {
          row.values.emplace_back(std::monostate{});
        }
      } else {
        row.values.emplace_back(std::string(cell));
      }
    }
    data.rows.push_back(std::move(row));
  }
  if (!header_seen) throw HeaderMismatch("file is empty; expected header '" + join(schema.names()) + "'");
  return data;
}

Dataset load_csv(const std::filesystem::path& path, const ColumnSchema& schema,
                 Provenance provenance, const std::vector<std::string>& missing_markers) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), schema, provenance, missing_markers);
}

void write_csv(std::ostream& out, const Dataset& data) {
  const std::vector<std::string> names = data.schema.names();
  for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
  out << '\n';
  const Encoder enc(data.schema);
  for (const RowRecord& row : data.rows) {
    for (std::size_t i = 0; i < row.values.size(); ++i) {
      if (i) out << ',';
      const Cell& cell = row.values[i];
      if (data.schema[i].kind == ColumnKind::kCategorical && std::holds_alternative<double>(cell)) {
        out << format_cell(enc.decode_cell(i, std::get<double>(cell)));
      } else {
        out << format_cell(cell);
      }
    }
    out << '\n';
  }
}

std::string to_csv(const Dataset& data) {
  std::ostringstream ss;
  write_csv(ss, data);
  return ss.str();
}

Dataset preprocess(const Dataset& data) {
  Dataset out;
  out.schema = data.schema;
  out.provenance = data.provenance;
  const Encoder enc(data.schema);
  std::set<std::vector<double>> seen;
  std::vector<double> encoded(data.schema.size());
  for (const RowRecord& row : data.rows) {
    if (row.values.size() != data.schema.size()) {
      throw MalformedRow("row has " + std::to_string(row.values.size()) + " cells, expected " +
                         std::to_string(data.schema.size()));
    }
    if (std::any_of(row.values.begin(), row.values.end(), is_missing)) continue;
    for (std::size_t i = 0; i < row.values.size(); ++i) {
      try {
        encoded[i] = enc.encode_cell(i, row.values[i]);
      } catch (const EncodingError&) {
        throw UnknownCategory(format_cell(row.values[i]), data.schema[i].name);
      }
    }
    if (!seen.insert(encoded).second) continue;
    RowRecord r;
    r.values.assign(encoded.begin(), encoded.end());
    out.rows.push_back(std::move(r));
  }
  return out;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train fraction must lie strictly between 0 and 1");
  }
  if (n < 2) throw TooSmall("need at least 2 rows to split, have " + std::to_string(n));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);
  auto n_train = static_cast<std::size_t>(static_cast<double>(n) * train_fraction + 1e-9);
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
  std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  return {std::move(train), std::move(test)};
}

Dataset subset(const Dataset& data, const std::vector<std::size_t>& indices) {
  Dataset out;
  out.schema = data.schema;
  out.provenance = data.provenance;
  out.rows.reserve(indices.size());
  for (std::size_t i : indices) out.rows.push_back(data.rows.at(i));
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction, std::uint64_t seed) {
  auto [train, test] = split_indices(data.size(), train_fraction, seed);
  return {subset(data, train), subset(data, test)};
}

FeatureMatrix to_matrix(const Dataset& data) {
  const Encoder enc(data.schema);
  FeatureMatrix x(data.size(), data.schema.size());
  for (std::size_t i = 0; i < data.size(); ++i) enc.encode_into(data.rows[i], x.row(i));
  return x;
}

TaskData to_task(const Dataset& data, std::size_t target_column) {
  if (target_column >= data.schema.size()) throw SchemaMismatch("target column out of range");
  const Encoder enc(data.schema);
  const std::size_t d = data.schema.size();
  TaskData out{FeatureMatrix(data.size(), d - 1), std::vector<double>(data.size())};
  std::vector<double> row(d);
  for (std::size_t i = 0; i < data.size(); ++i) {
    enc.encode_into(data.rows[i], row);
    std::size_t k = 0;
    for (std::size_t j = 0; j < d; ++j) {
      if (j == target_column) {
        out.y[i] = row[j];
      } else {
        out.x.at(i, k++) = row[j];
      }
    }
  }
  return out;
}

std::pair<FeatureMatrix, FeatureMatrix> normalize(const Dataset& a, const Dataset& b) {
  if (a.schema.size() != b.schema.size()) {
    throw SchemaMismatch("datasets have " + std::to_string(a.schema.size()) + " and " +
                         std::to_string(b.schema.size()) + " columns");
  }
  FeatureMatrix xa = to_matrix(a);
  FeatureMatrix xb = to_matrix(b);
  for (std::size_t j = 0; j < xa.cols(); ++j) {
    std::vector<double> col = xa.column(j);
    const std::vector<double> col_b = xb.column(j);
    col.insert(col.end(), col_b.begin(), col_b.end());
    if (col.empty()) continue;
    const kernels::MinMax mm = kernels::min_max(col);
    const double range = mm.hi - mm.lo;
    auto scale = [&](double v) {
      return range > 0 ? std::clamp((v - mm.lo) / range, 0.0, 1.0) : 0.0;
    };
    for (std::size_t i = 0; i < xa.rows(); ++i) xa.at(i, j) = scale(xa.at(i, j));
    for (std::size_t i = 0; i < xb.rows(); ++i) xb.at(i, j) = scale(xb.at(i, j));
  }
  return {std::move(xa), std::move(xb)};
}

}  // namespace tabfuzz
