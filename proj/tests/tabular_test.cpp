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

#include <gtest/gtest.h>

#include "tabfuzz/encoding.hpp"
#include "tabfuzz/errors.hpp"
#include "test_util.hpp"

namespace tabfuzz {
namespace {

using testing::census_grammar;

ColumnSchema census_schema() { return schema_from_grammar(census_grammar()); }

RowRecord person(double age, const std::string& job, double income) {
  return RowRecord{{age, job, income}};
}

Dataset census(std::vector<RowRecord> rows) {
  return Dataset{census_schema(), std::move(rows), Provenance::kOriginal};
}

TEST(TabularTest, LoadsTheTwoRowExample) {
  testing::TempDir dir;
  testing::write_file(dir.path() / "people.csv",
                      "age, job, income\n29, librarian, 9427\n45, president, 100\n");
  const Dataset d = load_csv(dir.path() / "people.csv", census_schema());
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.schema.size(), 3u);
  EXPECT_EQ(d.rows[0], person(29, "librarian", 9427));
  EXPECT_EQ(d.rows[1], person(45, "president", 100));
}

TEST(TabularTest, EmptyFileIsHeaderMismatch) {
  EXPECT_THROW(parse_csv("", census_schema()), HeaderMismatch);
  EXPECT_THROW(parse_csv("age,income,job\n", census_schema()), HeaderMismatch);
}

TEST(TabularTest, MissingFileIsAnError) {
  EXPECT_THROW(load_csv("/nonexistent/none.csv", census_schema()), Error);
}

TEST(TabularTest, UnparseableNumberLoadsAsMissing) {
  const Dataset d = parse_csv("age,job,income\nabc,librarian,5\n?,president,NA\n", census_schema());
  ASSERT_EQ(d.size(), 2u);
  EXPECT_TRUE(is_missing(d.rows[0].values[0]));
  EXPECT_FALSE(is_missing(d.rows[0].values[2]));
  EXPECT_TRUE(is_missing(d.rows[1].values[0]));
  EXPECT_TRUE(is_missing(d.rows[1].values[2]));
}

TEST(TabularTest, CustomMissingMarkers) {
  const Dataset d = parse_csv("age,job,income\n-,librarian,5\n", census_schema(),
                              Provenance::kOriginal, {"-"});
  EXPECT_TRUE(is_missing(d.rows[0].values[0]));
}

TEST(TabularTest, WrongArityIsMalformed) {
  EXPECT_THROW(parse_csv("age,job,income\n1,librarian\n", census_schema()), MalformedRow);
}

TEST(TabularTest, CrLfAndBlankLinesAreTolerated) {
  const Dataset d = parse_csv("age,job,income\r\n1,librarian,2\r\n\r\n", census_schema());
  EXPECT_EQ(d.size(), 1u);
}

TEST(TabularTest, PreprocessDeduplicatesDropsAndEncodes) {
  const RowRecord r1 = person(29, "librarian", 9427);
  const RowRecord r2 = person(45, "president", 100);
  RowRecord missing = person(30, "librarian", 0);
  missing.values[2] = std::monostate{};
  const Dataset out = preprocess(census({r1, r1, missing, r2}));
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out.rows[0], (RowRecord{{29.0, 0.0, 9427.0}}));
  EXPECT_EQ(out.rows[1], (RowRecord{{45.0, 2.0, 100.0}}));
}

TEST(TabularTest, PreprocessRejectsUnknownCategory) {
  try {
    preprocess(census({person(29, "janitor", 1)}));
    FAIL() << "expected UnknownCategory";
  } catch (const UnknownCategory& e) {
    EXPECT_EQ(e.token(), "janitor");
    EXPECT_EQ(e.column(), "job");
  }
}

TEST(TabularTest, PreprocessIsIdempotent) {
  Rng rng(1);
  const char* jobs[] = {"librarian", "neurosurgeon", "president"};
  std::vector<RowRecord> rows;
  for (int i = 0; i < 200; ++i) {
    RowRecord r = person(static_cast<double>(rng.uniform_index(5)), jobs[rng.uniform_index(3)],
                         static_cast<double>(rng.uniform_index(3)));
    if (rng.bernoulli(0.1)) r.values[rng.uniform_index(3)] = std::monostate{};
    rows.push_back(r);
  }
  const Dataset once = preprocess(census(rows));
  const Dataset twice = preprocess(once);
  EXPECT_EQ(once.rows, twice.rows);
  EXPECT_LT(once.size(), rows.size());
}

TEST(TabularTest, EncodeDecodeIsIdentity) {
  const Encoder enc(census_schema());
  for (const char* job : {"librarian", "neurosurgeon", "president"}) {
    const Cell cell = std::string(job);
    EXPECT_EQ(enc.decode_cell(1, enc.encode_cell(1, cell)), cell);
  }
  EXPECT_EQ(enc.encode_cell(1, std::string("librarian")), 0.0);
  EXPECT_THROW(enc.decode_cell(1, 3.0), EncodingError);
}

TEST(TabularTest, WriteCsvDecodesCategories) {
  const Dataset d = preprocess(census({person(29, "librarian", 9427), person(30.5, "president", 1)}));
  EXPECT_EQ(to_csv(d), "age,job,income\n29,librarian,9427\n30.5,president,1\n");
  const Dataset back = preprocess(parse_csv(to_csv(d), d.schema));
  EXPECT_EQ(back.rows, d.rows);
}

TEST(TabularTest, SplitSizesAndDeterminism) {
  std::vector<RowRecord> rows;
  for (int i = 0; i < 10; ++i) rows.push_back(person(i, "librarian", i));
  const Dataset d = census(rows);
  const auto [train, test] = split(d, 0.7, 42);
  EXPECT_EQ(train.size(), 7u);
  EXPECT_EQ(test.size(), 3u);
  const auto [train2, test2] = split(d, 0.7, 42);
  EXPECT_EQ(train.rows, train2.rows);
  EXPECT_EQ(test.rows, test2.rows);
  const auto [train3, test3] = split(d, 0.7, 43);
  EXPECT_NE(train.rows, train3.rows);
}

TEST(TabularTest, SplitEdgeCases) {
  EXPECT_THROW(split(census({person(1, "librarian", 1)}), 0.7, 1), TooSmall);
  const Dataset two = census({person(1, "librarian", 1), person(2, "librarian", 2)});
  const auto [a, b] = split(two, 0.1, 1);
  EXPECT_EQ(a.size(), 1u);
  EXPECT_EQ(b.size(), 1u);
  EXPECT_THROW(split(two, 1.0, 1), std::invalid_argument);
}

TEST(TabularTest, NormalizeUsesUnionBounds) {
  const Dataset a = census({person(0, "librarian", 5), person(1, "librarian", 5)});
  const Dataset b = census({person(1, "president", 5), person(2, "president", 5)});
  const auto [na, nb] = normalize(a, b);
  EXPECT_EQ(na.column(0), (std::vector<double>{0.0, 0.5}));
  EXPECT_EQ(nb.column(0), (std::vector<double>{0.5, 1.0}));
  EXPECT_EQ(na.column(1), (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(nb.column(1), (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(na.column(2), (std::vector<double>{0.0, 0.0}));
}

TEST(TabularTest, NormalizedCellsStayInUnitInterval) {
  Rng rng(5);
  std::vector<RowRecord> ra, rb;
  for (int i = 0; i < 100; ++i) {
    ra.push_back(person(rng.uniform(-50, 50), "neurosurgeon", rng.normal() * 1e6));
    rb.push_back(person(rng.uniform(0, 90), "librarian", rng.normal()));
  }
  const auto [na, nb] = normalize(census(ra), census(rb));
  for (const FeatureMatrix* m : {&na, &nb}) {
    for (std::size_t i = 0; i < m->rows(); ++i) {
      for (std::size_t j = 0; j < m->cols(); ++j) {
        EXPECT_GE(m->at(i, j), 0.0);
        EXPECT_LE(m->at(i, j), 1.0);
      }
    }
  }
}

TEST(TabularTest, ToTaskHoldsOutTarget) {
  const Dataset d = preprocess(census({person(29, "president", 9427)}));
  const TaskData t = to_task(d, 1);
  EXPECT_EQ(t.x.cols(), 2u);
  EXPECT_EQ(t.x.at(0, 0), 29.0);
  EXPECT_EQ(t.x.at(0, 1), 9427.0);
  EXPECT_EQ(t.y, (std::vector<double>{2.0}));
}

}  // namespace
}  // namespace tabfuzz
