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

#ifndef TABFUZZ_DERIVATION_HPP_
#define TABFUZZ_DERIVATION_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabfuzz/grammar.hpp"
#include "tabfuzz/rng.hpp"

namespace tabfuzz {

// A parse tree. Nonterminal and group nodes have one child per item of the
// chosen alternative; an item with `*` or `+` contributes a repeat node whose
// children are the repetitions. Terminals are leaves.
struct DerivationTree {
  enum class Kind { kNonterminal, kTerminal, kGroup, kRepeat };

  Kind kind = Kind::kTerminal;
  // Nonterminal symbol or terminal literal; empty for group and repeat nodes.
  std::string symbol;
  std::size_t alternative = 0;
  std::vector<DerivationTree> children;

  bool operator==(const DerivationTree&) const = default;

  // Concatenated terminal leaves.
  std::string to_string() const;
  void append_to(std::string& out) const;
};

// Path of child indices from the root.
using TreePath = std::vector<std::size_t>;

inline constexpr std::size_t kDefaultDepthBudget = 64;

// Star counts are geometric with mean 4; plus counts are 1 + geometric with
// mean 4 overall. Both are capped at this many repetitions.
inline constexpr std::size_t kMaxRepetitions = 20;

// Random derivation of `symbol`. Only alternatives that can still terminate
// within the remaining budget are drawn, uniformly. Throws
// UnsatisfiableGrammar if the symbol has no derivation within the budget.
DerivationTree generate_random(const Grammar& grammar, std::string_view symbol, Rng& rng,
                               std::size_t depth_budget = kDefaultDepthBudget);

// Recursive-descent parse of `text` as `symbol`, with backtracking. For an
// unambiguous grammar the result is the unique derivation.
std::optional<DerivationTree> parse_tree(const Grammar& grammar, std::string_view symbol,
                                         std::string_view text);

bool recognizes(const Grammar& grammar, std::string_view symbol, std::string_view text);

// True if every node's children match an alternative of its symbol.
bool is_valid(const Grammar& grammar, const DerivationTree& tree);

// Paths of all nonterminal nodes in preorder, root first.
std::vector<TreePath> nonterminal_paths(const DerivationTree& tree);

DerivationTree& node_at(DerivationTree& tree, const TreePath& path);
const DerivationTree& node_at(const DerivationTree& tree, const TreePath& path);

}  // namespace tabfuzz

#endif  // TABFUZZ_DERIVATION_HPP_
