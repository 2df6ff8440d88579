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

#include <gtest/gtest.h>

#include "tabfuzz/errors.hpp"
#include "test_util.hpp"

namespace tabfuzz {
namespace {

using testing::census_grammar;

RowRecord row_of(const std::string& text) {
  const Grammar& g = census_grammar();
  const auto tree = parse_tree(g, g.row_symbol(), text);
  if (!tree) throw std::runtime_error("not a row: " + text);
  return tree_to_row(*tree, schema_from_grammar(g));
}

TEST(RowTest, SchemaFromCensusGrammar) {
  const ColumnSchema s = schema_from_grammar(census_grammar());
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.names(), (std::vector<std::string>{"age", "job", "income"}));
  EXPECT_EQ(s[0].kind, ColumnKind::kNumeric);
  EXPECT_EQ(s[1].kind, ColumnKind::kCategorical);
  EXPECT_EQ(s[1].vocabulary,
            (std::vector<std::string>{"librarian", "neurosurgeon", "president"}));
  EXPECT_EQ(s[2].kind, ColumnKind::kNumeric);
  EXPECT_EQ(s.index_of_symbol("<income>"), 2u);
  EXPECT_FALSE(s.target().has_value());
  EXPECT_EQ(s.with_target("income").target(), 2u);
  EXPECT_THROW(s.with_target("salary"), SchemaMismatch);
}

TEST(RowTest, TreeToRowSplitsColumns) {
  EXPECT_EQ(row_of("29, librarian, 9427"),
            (RowRecord{{29.0, std::string("librarian"), 9427.0}}));
  EXPECT_EQ(row_of("78, president, 19300"),
            (RowRecord{{78.0, std::string("president"), 19300.0}}));
}

TEST(RowTest, EmptyNumeralIsMalformed) {
  // A grammar whose age may be empty, with the schema of the census grammar.
  const Grammar g = parse_spec(
      "<row> ::= <age> ', ' <job> ', ' <income>\n<age> ::= <digit>*\n"
      "<job> ::= 'librarian' | 'president'\n<income> ::= <digit>+\n<digit> ::= '0' | ... | '9'\n");
  const auto tree = parse_tree(g, "<row>", ", librarian, 9427");
  ASSERT_TRUE(tree);
  EXPECT_THROW(tree_to_row(*tree, schema_from_grammar(g)), MalformedRow);
}

TEST(RowTest, ArityMatchesSchemaForRandomRows) {
  const Grammar& g = census_grammar();
  const ColumnSchema s = schema_from_grammar(g);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const RowRecord r = tree_to_row(generate_random(g, "<row>", rng), s);
    ASSERT_EQ(r.values.size(), 3u);
    EXPECT_TRUE(std::holds_alternative<double>(r.values[0]));
    EXPECT_TRUE(std::holds_alternative<std::string>(r.values[1]));
  }
}

TEST(RowTest, NumericColumnWithDigitAlternativesStaysNumeric) {
  const Grammar g = parse_spec("<row> ::= <d> ',' <c>\n<d> ::= '1' | '2'\n<c> ::= 'x' | '3'\n");
  const ColumnSchema s = schema_from_grammar(g);
  EXPECT_EQ(s[0].kind, ColumnKind::kNumeric);
  EXPECT_EQ(s[1].kind, ColumnKind::kCategorical);
  EXPECT_EQ(s[1].vocabulary, (std::vector<std::string>{"x", "3"}));
}

TEST(RowTest, HeaderArityMustMatch) {
  EXPECT_THROW(schema_from_grammar(parse_spec("<start> ::= <header> <row>\n<header> ::= 'a, b'\n"
                                              "<row> ::= <x>\n<x> ::= '1'\n")),
               SchemaMismatch);
}

TEST(RowTest, ParseNumberIsStrict) {
  EXPECT_EQ(parse_number("42"), 42.0);
  EXPECT_EQ(parse_number("-1.5"), -1.5);
  EXPECT_EQ(parse_number("+3"), 3.0);
  EXPECT_EQ(parse_number("007"), 7.0);
  EXPECT_FALSE(parse_number(""));
  EXPECT_FALSE(parse_number("abc"));
  EXPECT_FALSE(parse_number("1.5x"));
  EXPECT_FALSE(parse_number(" 1"));
  EXPECT_FALSE(parse_number("inf"));
  EXPECT_FALSE(parse_number("nan"));
}

TEST(RowTest, FormatNumberRoundTrips) {
  EXPECT_EQ(format_number(29.0), "29");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(30.1), "30.1");
  EXPECT_EQ(format_number(1e20), "1e+20");
  for (double v : {0.1, 1.0 / 3.0, 12345.678, -2.5e-7}) {
    EXPECT_EQ(parse_number(format_number(v)), v);
  }
}

TEST(RowTest, RowKeyJoinsCells) {
  EXPECT_EQ(row_key(RowRecord{{29.0, std::string("librarian"), std::monostate{}}}),
            "29,librarian,");
}

}  // namespace
}  // namespace tabfuzz
