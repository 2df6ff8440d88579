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

// Context-free grammars for tabular rows.
//
// The spec language is a small BNF dialect:
//
//   <start>  ::= <header> '\n' <rows>
//   <rows>   ::= (<row> '\n')*
//   <row>    ::= <age> ', ' <job>
//   <age>    ::= <digit>+
//   <job>    ::= 'librarian' | 'president'
//   <digit>  ::= '0' | '1' | ... | '9'
//
//   where int(<age>) > 18 & int(<age>) < 70
//
// Literals are single- or double-quoted with C escapes. Items may be grouped
// with parentheses and repeated with `*` or `+`. An alternative that is
// exactly `...` between two one-character literals expands to the character
// range between them. Lines starting with `where` (and everything after the
// first of them) hold constraint expressions; the grammar keeps their text
// and the constraints module compiles them. `#` starts a comment.

#ifndef TABFUZZ_GRAMMAR_HPP_
#define TABFUZZ_GRAMMAR_HPP_

#include <cstddef>
#include <filesystem>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace tabfuzz {

enum class Repetition { kOnce, kStar, kPlus };

struct Alternative;

struct Item {
  enum class Kind { kNonterminal, kTerminal, kGroup };

  Kind kind = Kind::kTerminal;
  // "<name>" for nonterminals, the unescaped literal for terminals.
  std::string text;
  // Alternatives of a parenthesized group; empty otherwise.
  std::vector<Alternative> group;
  Repetition repetition = Repetition::kOnce;
};

struct Alternative {
  std::vector<Item> items;
};

// One `where` clause as written, with its source line.
struct ConstraintSource {
  std::string text;
  std::size_t line = 0;
};

inline constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

// Immutable after parsing; safe to share between threads.
class Grammar {
 public:
  const std::string& start_symbol() const { return start_; }

  // Nonterminals in order of definition, including angle brackets.
  const std::vector<std::string>& nonterminals() const { return order_; }
  const std::set<std::string>& terminals() const { return terminals_; }

  bool has_nonterminal(std::string_view symbol) const;

  // Throws UndefinedNonterminal.
  const std::vector<Alternative>& alternatives(std::string_view symbol) const;

  const std::vector<ConstraintSource>& constraint_sources() const {
    return constraints_;
  }

  // "<row>" when defined, otherwise the start symbol.
  const std::string& row_symbol() const;

  // Height of the shallowest derivation tree for the symbol, counting
  // nonterminal nodes only; kUnbounded if the symbol never terminates.
  std::size_t min_height(std::string_view symbol) const;
  std::size_t min_height(const Item& item) const;
  std::size_t min_height(const Alternative& alternative) const;

 private:
  friend Grammar parse_spec(std::string_view text);

  void compute_heights();

  std::string start_;
  std::vector<std::string> order_;
  std::map<std::string, std::vector<Alternative>, std::less<>> productions_;
  std::set<std::string> terminals_;
  std::vector<ConstraintSource> constraints_;
  std::map<std::string, std::size_t, std::less<>> heights_;
};

// Throws SyntaxError or UndefinedNonterminal.
Grammar parse_spec(std::string_view text);
Grammar load_spec(const std::filesystem::path& path);

}  // namespace tabfuzz

#endif  // TABFUZZ_GRAMMAR_HPP_
