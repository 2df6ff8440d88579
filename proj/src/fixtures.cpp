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

#include "tabfuzz/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "tabfuzz/errors.hpp"
#include "tabfuzz/rng.hpp"

namespace tabfuzz {
namespace {

constexpr const char* kGrammarLicense =
    "# Copyright 2026 The Tabfuzz Authors\n"
    "#\n"
    "# Licensed under the Apache License, Version 2.0 (the \"License\");\n"
    "# you may not use this file except in compliance with the License.\n"
    "# You may obtain a copy of the License at\n"
    "#\n"
    "#      http://www.apache.org/licenses/LICENSE-2.0\n"
    "#\n"
    "# Unless required by applicable law or agreed to in writing, software\n"
    "# distributed under the License is distributed on an \"AS IS\" BASIS,\n"
    "# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.\n"
    "# See the License for the specific language governing permissions and\n"
    "# limitations under the License.\n";

std::size_t digit_count(double v) {
  std::size_t n = 1;
  for (auto x = static_cast<long long>(v); x >= 10; x /= 10) ++n;
  return n;
}

// Alternatives spelling every non-negative number in [lo, hi] with at most
// `decimals` fraction digits, as format_number prints it.
std::string number_production(const std::string& symbol, double lo, double hi, int decimals) {
  std::vector<std::string> alts;
  for (std::size_t n = digit_count(lo); n <= digit_count(hi); ++n) {
    std::string whole;
    for (std::size_t i = 0; i < n; ++i) whole += (i ? " <digit>" : "<digit>");
    alts.push_back(whole);
    std::string frac = whole + " '.'";
    for (int d = 0; d < decimals; ++d) {
      frac += " <digit>";
      alts.push_back(frac);
    }
  }
  std::string out = symbol + " ::= ";
  for (std::size_t i = 0; i < alts.size(); ++i) out += (i ? " | " : "") + alts[i];
  return out + "\n";
}

std::string bound(double v) { return format_number(v); }

double grid_value(const FixtureColumn& c, Rng& rng) {
  const double step = std::pow(10.0, -c.decimals);
  const auto count = static_cast<std::size_t>(std::llround((c.hi - c.lo) / step)) + 1;
  const double v = c.lo + step * static_cast<double>(rng.uniform_index(count));
  const double scale = std::pow(10.0, c.decimals);
  return std::round(v * scale) / scale;
}

double grid_variance(const FixtureColumn& c) {
  const double step = std::pow(10.0, -c.decimals);
  const double count = std::round((c.hi - c.lo) / step) + 1;
  return step * step * (count * count - 1) / 12.0;
}

std::vector<double> normalized_weights(const FixtureColumn& c) {
  std::vector<double> w = c.weights.empty() ? std::vector<double>(c.vocabulary.size(), 1.0) : c.weights;
  double total = 0;
  for (double x : w) total += x;
  for (double& x : w) x /= total;
  return w;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

void FixtureSpec::validate() const {
  if (name.empty()) throw ConfigError("fixture needs a name");
  if (rows < 2) throw ConfigError("fixture needs at least 2 rows");
  if (features.empty()) throw ConfigError("fixture needs at least one feature");
  std::set<std::string> names;
  auto check_numeric = [](const std::string& n, double lo, double hi, int decimals) {
    if (!(lo >= 0.0 && lo <= hi && std::isfinite(hi))) {
      throw ConfigError(n + ": numeric range must satisfy 0 <= lo <= hi");
    }
    if (decimals < 0 || decimals > 6) throw ConfigError(n + ": decimals must lie in [0, 6]");
  };
  for (const FixtureColumn& c : features) {
    if (c.name.empty() || !names.insert(c.name).second) {
      throw ConfigError("feature names must be unique and nonempty");
    }
    if (c.kind == ColumnKind::kNumeric) {
      check_numeric(c.name, c.lo, c.hi, c.decimals);
      continue;
    }
    if (c.vocabulary.empty()) throw ConfigError(c.name + ": empty vocabulary");
    std::set<std::string> levels;
    for (const std::string& v : c.vocabulary) {
      if (v.empty() || parse_number(v) || v.find(',') != std::string::npos ||
          v.find('\'') != std::string::npos || !levels.insert(v).second) {
        throw ConfigError(c.name + ": vocabulary entries must be distinct non-numeric tokens");
      }
    }
    if (!c.weights.empty()) {
      if (c.weights.size() != c.vocabulary.size()) {
        throw ConfigError(c.name + ": one weight per vocabulary entry");
      }
      double total = 0;
      for (double w : c.weights) {
        if (!(w >= 0)) throw ConfigError(c.name + ": weights must be non-negative");
        total += w;
      }
      if (!(total > 0)) throw ConfigError(c.name + ": weights must not all be zero");
    }
  }
  if (target.name.empty() || names.count(target.name)) {
    throw ConfigError("target name must be nonempty and distinct from the features");
  }
  check_numeric(target.name, target.lo, target.hi, target.decimals);
  if (!(target.noise_sigma >= 0)) throw ConfigError("noise sigma must be non-negative");
  for (const FixtureTerm& t : target.terms) {
    const auto it = std::find_if(features.begin(), features.end(),
                                 [&](const FixtureColumn& c) { return c.name == t.column; });
    if (it == features.end()) throw ConfigError("term references unknown column " + t.column);
    if (it->kind == ColumnKind::kCategorical &&
        std::find(it->vocabulary.begin(), it->vocabulary.end(), t.level) == it->vocabulary.end()) {
      throw ConfigError("term references unknown level '" + t.level + "' of " + t.column);
    }
  }
}

Fixture make_fixture(const FixtureSpec& spec) {
  spec.validate();
  Fixture fx;
  fx.name = spec.name;

  // Grammar.
  std::vector<Column> columns;
  std::string header = "<header> ::= '";
  std::string row = "<row> ::= ";
  std::string productions;
  std::vector<std::string> where;
  auto add_numeric = [&](const std::string& name, double lo, double hi, int decimals) {
    const std::string sym = "<" + name + ">";
    productions += number_production(sym, lo, hi, decimals);
    const std::string conv = decimals ? "float(" : "int(";
    where.push_back(conv + sym + ") >= " + bound(lo));
    where.push_back(conv + sym + ") <= " + bound(hi));
    return sym;
  };
  for (std::size_t j = 0; j <= spec.features.size(); ++j) {
    const bool is_target = j == spec.features.size();
    const std::string& name = is_target ? spec.target.name : spec.features[j].name;
    std::string sym;
    Column col;
    col.name = name;
    if (is_target) {
      sym = add_numeric(name, spec.target.lo, spec.target.hi, spec.target.decimals);
    } else if (spec.features[j].kind == ColumnKind::kNumeric) {
      const FixtureColumn& c = spec.features[j];
      sym = add_numeric(name, c.lo, c.hi, c.decimals);
    } else {
      sym = "<" + name + ">";
      productions += sym + " ::= ";
      for (std::size_t k = 0; k < spec.features[j].vocabulary.size(); ++k) {
        productions += (k ? " | '" : "'") + spec.features[j].vocabulary[k] + "'";
      }
      productions += "\n";
      col.kind = ColumnKind::kCategorical;
      col.vocabulary = spec.features[j].vocabulary;
    }
    col.symbol = sym;
    col.is_target = is_target;
    columns.push_back(col);
    header += (j ? ", " : "") + name;
    row += (j ? " ', ' " : "") + sym;
  }
  header += "'\n";
  fx.grammar = std::string(kGrammarLicense) + "\n<start> ::= <header> '\\n' <rows>\n" + header + "<rows> ::= (<row> '\\n')*\n" +
               row + "\n" + productions + "<digit> ::= '0' | ... | '9'\nwhere ";
  for (std::size_t i = 0; i < where.size(); ++i) fx.grammar += (i ? " & " : "") + where[i];
  fx.grammar += "\n";

  // Rows.
  fx.data.schema = ColumnSchema(columns);
  Rng rng(derive_seed(spec.seed, {stream_id("fixture"), stream_id(spec.name)}));
  std::set<std::string> seen;
  std::vector<std::vector<double>> weights;
  for (const FixtureColumn& c : spec.features) {
    weights.push_back(c.kind == ColumnKind::kCategorical ? normalized_weights(c) : std::vector<double>{});
  }
  const double scale = std::pow(10.0, spec.target.decimals);
  std::size_t attempts = 0;
  while (fx.data.size() < spec.rows) {
    if (++attempts > 1000 * spec.rows) throw ConfigError("fixture ranges are too narrow for distinct rows");
    RowRecord r;
    double y = spec.target.intercept;
    for (std::size_t j = 0; j < spec.features.size(); ++j) {
      const FixtureColumn& c = spec.features[j];
      if (c.kind == ColumnKind::kNumeric) {
        r.values.emplace_back(grid_value(c, rng));
      } else {
        double u = rng.uniform01();
        std::size_t k = 0;
        while (k + 1 < weights[j].size() && u >= weights[j][k]) u -= weights[j][k++];
        r.values.emplace_back(c.vocabulary[k]);
      }
    }
    for (const FixtureTerm& t : spec.target.terms) {
      for (std::size_t j = 0; j < spec.features.size(); ++j) {
        if (spec.features[j].name != t.column) continue;
        if (spec.features[j].kind == ColumnKind::kNumeric) {
          y += t.coefficient * std::get<double>(r.values[j]);
        } else if (std::get<std::string>(r.values[j]) == t.level) {
          y += t.coefficient;
        }
      }
    }
    y += spec.target.noise_sigma * rng.normal();
    y = std::clamp(std::round(y * scale) / scale, spec.target.lo, spec.target.hi);
    r.values.emplace_back(y);
    if (!seen.insert(row_key(r)).second) continue;
    fx.data.rows.push_back(std::move(r));
  }

  fx.csv = "";
  for (std::size_t j = 0; j < columns.size(); ++j) fx.csv += (j ? ", " : "") + columns[j].name;
  fx.csv += "\n";
  for (const RowRecord& r : fx.data.rows) {
    for (std::size_t j = 0; j < r.values.size(); ++j) {
      fx.csv += (j ? ", " : "") + format_cell(r.values[j]);
    }
    fx.csv += "\n";
  }

  // Planted dependencies.
  double var = spec.target.noise_sigma * spec.target.noise_sigma;
  std::string formula = spec.target.name + " = " + format_number(spec.target.intercept);
  for (const FixtureTerm& t : spec.target.terms) {
    const auto& c = *std::find_if(spec.features.begin(), spec.features.end(),
                                  [&](const FixtureColumn& f) { return f.name == t.column; });
    if (c.kind == ColumnKind::kNumeric) {
      var += t.coefficient * t.coefficient * grid_variance(c);
      formula += " + " + format_number(t.coefficient) + " * " + t.column;
    } else {
      const std::vector<double> w = normalized_weights(c);
      const std::size_t k = static_cast<std::size_t>(
          std::find(c.vocabulary.begin(), c.vocabulary.end(), t.level) - c.vocabulary.begin());
      var += t.coefficient * t.coefficient * w[k] * (1 - w[k]);
      formula += " + " + format_number(t.coefficient) + " * [" + t.column + " == " + t.level + "]";
    }
  }
  formula += " + N(0, " + format_number(spec.target.noise_sigma) + "^2)";
  fx.r2_ceiling = var > 0 ? 1.0 - spec.target.noise_sigma * spec.target.noise_sigma / var : 0.0;
  fx.meta = "fixture " + spec.name + "\nrows " + std::to_string(spec.rows) + "\nseed " +
            std::to_string(spec.seed) + "\ntarget " + formula + "\nrounded to " +
            std::to_string(spec.target.decimals) + " decimals, clipped to [" +
            format_number(spec.target.lo) + ", " + format_number(spec.target.hi) +
            "]\nfeatures drawn independently\nr2_ceiling " + fixed(fx.r2_ceiling, 4) +
            " (1 - noise variance / target variance, before rounding and clipping)\n";
  return fx;
}

FixtureSpec mini_insurance_spec(std::uint64_t seed) {
  FixtureSpec s;
  s.name = "mini_insurance";
  s.rows = 600;
  s.seed = seed;
  FixtureColumn age{"age", ColumnKind::kNumeric, 18, 64, 0, {}, {}};
  FixtureColumn sex{"sex", ColumnKind::kCategorical, 0, 0, 0, {"female", "male"}, {}};
  FixtureColumn bmi{"bmi", ColumnKind::kNumeric, 15, 45, 1, {}, {}};
  FixtureColumn smoker{"smoker", ColumnKind::kCategorical, 0, 0, 0, {"yes", "no"}, {0.2, 0.8}};
  s.features = {age, sex, bmi, smoker};
  s.target.name = "charges";
  s.target.intercept = 1000;
  s.target.terms = {{"age", 50, ""}, {"smoker", 800, "yes"}};
  s.target.noise_sigma = 200;
  s.target.lo = 1000;
  s.target.hi = 9999;
  return s;
}

FixtureSpec pure_noise_spec(std::uint64_t seed) {
  FixtureSpec s = mini_insurance_spec(seed);
  s.name = "pure_noise";
  s.target.intercept = 5500;
  s.target.terms.clear();
  s.target.noise_sigma = 2000;
  return s;
}

void write_fixture(const Fixture& fixture, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto put = [&](const std::string& file, const std::string& text) {
    std::ofstream out(dir / file, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw Error("cannot write " + (dir / file).string());
  };
  put(fixture.name + ".csv", fixture.csv);
  put(fixture.name + ".grammar", fixture.grammar);
  put(fixture.name + ".meta.txt", fixture.meta);
}

}  // namespace tabfuzz
