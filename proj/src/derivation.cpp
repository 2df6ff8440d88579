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

#include "tabfuzz/derivation.hpp"

#include <algorithm>
#include <map>
#include <type_traits>
#include <utility>

#include "tabfuzz/errors.hpp"

namespace tabfuzz {
namespace {

// Non-owning callable reference; continuations never outlive the call.
template <typename Sig>
class FunctionRef;

template <typename R, typename... Args>
class FunctionRef<R(Args...)> {
 public:
  template <typename F>
    requires(!std::is_same_v<std::remove_cvref_t<F>, FunctionRef>)
  FunctionRef(F& f)  // NOLINT(google-explicit-constructor)
      : obj_(&f), call_([](void* o, Args... a) -> R { return (*static_cast<F*>(o))(a...); }) {}

  R operator()(Args... a) const { return call_(obj_, a...); }

 private:
  void* obj_;
  R (*call_)(void*, Args...);
};

class Generator {
 public:
  Generator(const Grammar& g, Rng& rng) : g_(g), rng_(rng) {}

  DerivationTree expand(const std::string& symbol, std::size_t budget) {
    const std::vector<Alternative>& alts = g_.alternatives(symbol);
    DerivationTree node;
    node.kind = DerivationTree::Kind::kNonterminal;
    node.symbol = symbol;
    node.alternative = choose(alts, budget - 1);
    expand_items(alts[node.alternative], budget - 1, node.children);
    return node;
  }

 private:
  // Index of a uniformly drawn alternative whose derivation fits `budget`.
  std::size_t choose(const std::vector<Alternative>& alts, std::size_t budget) {
    std::vector<std::size_t> feasible;
    for (std::size_t i = 0; i < alts.size(); ++i) {
      if (g_.min_height(alts[i]) <= budget) feasible.push_back(i);
    }
    if (feasible.empty()) throw UnsatisfiableGrammar("depth budget exhausted");
    return feasible[rng_.uniform_index(feasible.size())];
  }

  void expand_items(const Alternative& alt, std::size_t budget,
                    std::vector<DerivationTree>& out) {
    out.reserve(alt.items.size());
    for (const Item& item : alt.items) {
      if (item.repetition == Repetition::kOnce) {
        out.push_back(atom(item, budget));
        continue;
      }
      DerivationTree rep;
      rep.kind = DerivationTree::Kind::kRepeat;
      std::size_t count = 0;
      if (item.repetition == Repetition::kStar) {
        count = std::min(rng_.geometric(0.2), kMaxRepetitions);
        if (g_.min_height(item) > budget) count = 0;
      } else {
        count = 1 + std::min(rng_.geometric(0.25), kMaxRepetitions - 1);
      }
      rep.children.reserve(count);
      for (std::size_t i = 0; i < count; ++i) rep.children.push_back(atom(item, budget));
      out.push_back(std::move(rep));
    }
  }

  DerivationTree atom(const Item& item, std::size_t budget) {
    switch (item.kind) {
      case Item::Kind::kTerminal: {
        DerivationTree leaf;
        leaf.kind = DerivationTree::Kind::kTerminal;
        leaf.symbol = item.text;
        return leaf;
      }
      case Item::Kind::kNonterminal:
        return expand(item.text, budget);
      case Item::Kind::kGroup: {
        DerivationTree group;
        group.kind = DerivationTree::Kind::kGroup;
        group.alternative = choose(item.group, budget);
        expand_items(item.group[group.alternative], budget, group.children);
        return group;
      }
    }
    return {};
  }

  const Grammar& g_;
  Rng& rng_;
};

class TreeParser {
 public:
  TreeParser(const Grammar& g, std::string_view input) : g_(g), input_(input) {}

  std::optional<DerivationTree> parse(const std::string& symbol) {
    DerivationTree root;
    auto at_end = [&](std::size_t p) { return p == input_.size(); };
    if (nonterminal(symbol, 0, root, at_end)) return root;
    return std::nullopt;
  }

 private:
  using Cont = FunctionRef<bool(std::size_t)>;

  bool nonterminal(const std::string& symbol, std::size_t pos, DerivationTree& out, Cont k) {
    // Each productive left-recursive level consumes input, so nesting the same
    // symbol at one position deeper than the remaining length cannot help.
    const auto key = std::make_pair(symbol, pos);
    std::size_t& depth = active_[key];
    if (depth > input_.size() - pos) return false;
    ++depth;
    auto resume = [&](std::size_t p) {
      --active_[key];
      const bool ok = k(p);
      ++active_[key];
      return ok;
    };
    const std::vector<Alternative>& alts = g_.alternatives(symbol);
    bool ok = false;
    for (std::size_t a = 0; a < alts.size() && !ok; ++a) {
      out.kind = DerivationTree::Kind::kNonterminal;
      out.symbol = symbol;
      out.alternative = a;
      out.children.clear();
      ok = items(alts[a].items, 0, pos, out.children, resume);
    }
    --active_[key];
    return ok;
  }

  bool items(const std::vector<Item>& seq, std::size_t i, std::size_t pos,
             std::vector<DerivationTree>& children, Cont k) {
    if (i == seq.size()) return k(pos);
    const Item& item = seq[i];
    DerivationTree child;
    auto next = [&](std::size_t p) {
      children.push_back(std::move(child));
      const bool ok = items(seq, i + 1, p, children, k);
      if (!ok) {
        child = std::move(children.back());
        children.pop_back();
      }
      return ok;
    };
    if (item.repetition == Repetition::kOnce) return atom(item, pos, child, next);
    child.kind = DerivationTree::Kind::kRepeat;
    return repeat(item, pos, child, next);
  }

  // Greedy: tries one more repetition before stopping.
  bool repeat(const Item& item, std::size_t pos, DerivationTree& rep, Cont k) {
    DerivationTree element;
    auto more = [&](std::size_t p) {
      if (p == pos) return false;
      rep.children.push_back(std::move(element));
      const bool ok = repeat(item, p, rep, k);
      if (!ok) {
        element = std::move(rep.children.back());
        rep.children.pop_back();
      }
      return ok;
    };
    if (atom(item, pos, element, more)) return true;
    const std::size_t min = item.repetition == Repetition::kPlus ? 1 : 0;
    return rep.children.size() >= min && k(pos);
  }

  bool atom(const Item& item, std::size_t pos, DerivationTree& out, Cont k) {
    switch (item.kind) {
      case Item::Kind::kTerminal:
        if (input_.substr(pos).starts_with(item.text)) {
          out.kind = DerivationTree::Kind::kTerminal;
          out.symbol = item.text;
          out.alternative = 0;
          out.children.clear();
          return k(pos + item.text.size());
        }
        return false;
      case Item::Kind::kNonterminal:
        return nonterminal(item.text, pos, out, k);
      case Item::Kind::kGroup:
        for (std::size_t a = 0; a < item.group.size(); ++a) {
          out.kind = DerivationTree::Kind::kGroup;
          out.symbol.clear();
          out.alternative = a;
          out.children.clear();
          if (items(item.group[a].items, 0, pos, out.children, k)) return true;
        }
        return false;
    }
    return false;
  }

  const Grammar& g_;
  std::string_view input_;
  std::map<std::pair<std::string, std::size_t>, std::size_t> active_;
};

bool items_match(const Grammar& g, const std::vector<Item>& seq,
                 const std::vector<DerivationTree>& children);

bool atom_matches(const Grammar& g, const Item& item, const DerivationTree& node) {
  switch (item.kind) {
    case Item::Kind::kTerminal:
      return node.kind == DerivationTree::Kind::kTerminal && node.symbol == item.text &&
             node.children.empty();
    case Item::Kind::kNonterminal:
      return node.kind == DerivationTree::Kind::kNonterminal && node.symbol == item.text &&
             is_valid(g, node);
    case Item::Kind::kGroup:
      return node.kind == DerivationTree::Kind::kGroup && node.alternative < item.group.size() &&
             items_match(g, item.group[node.alternative].items, node.children);
  }
  return false;
}

bool items_match(const Grammar& g, const std::vector<Item>& seq,
                 const std::vector<DerivationTree>& children) {
  if (seq.size() != children.size()) return false;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const Item& item = seq[i];
    const DerivationTree& child = children[i];
    if (item.repetition == Repetition::kOnce) {
      if (!atom_matches(g, item, child)) return false;
      continue;
    }
    if (child.kind != DerivationTree::Kind::kRepeat) return false;
    if (item.repetition == Repetition::kPlus && child.children.empty()) return false;
    for (const DerivationTree& element : child.children) {
      if (!atom_matches(g, item, element)) return false;
    }
  }
  return true;
}

void collect_paths(const DerivationTree& node, TreePath& path, std::vector<TreePath>& out) {
  if (node.kind == DerivationTree::Kind::kNonterminal) out.push_back(path);
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    path.push_back(i);
    collect_paths(node.children[i], path, out);
    path.pop_back();
  }
}

}  // namespace

void DerivationTree::append_to(std::string& out) const {
  if (kind == Kind::kTerminal) {
    out += symbol;
    return;
  }
  for (const DerivationTree& c : children) c.append_to(out);
}

std::string DerivationTree::to_string() const {
  std::string out;
  append_to(out);
  return out;
}

DerivationTree generate_random(const Grammar& grammar, std::string_view symbol, Rng& rng,
                               std::size_t depth_budget) {
  const std::string sym(symbol);
  const std::size_t needed = grammar.min_height(sym);
  if (depth_budget == 0 || needed > depth_budget) {
    throw UnsatisfiableGrammar("cannot derive " + sym + " within depth budget " +
                               std::to_string(depth_budget));
  }
  return Generator(grammar, rng).expand(sym, depth_budget);
}

std::optional<DerivationTree> parse_tree(const Grammar& grammar, std::string_view symbol,
                                         std::string_view text) {
  const std::string sym(symbol);
  if (!grammar.has_nonterminal(sym)) throw UndefinedNonterminal(sym);
  return TreeParser(grammar, text).parse(sym);
}

bool recognizes(const Grammar& grammar, std::string_view symbol, std::string_view text) {
  return parse_tree(grammar, symbol, text).has_value();
}

bool is_valid(const Grammar& grammar, const DerivationTree& tree) {
  if (tree.kind != DerivationTree::Kind::kNonterminal || !grammar.has_nonterminal(tree.symbol)) {
    return false;
  }
  const std::vector<Alternative>& alts = grammar.alternatives(tree.symbol);
  return tree.alternative < alts.size() &&
         items_match(grammar, alts[tree.alternative].items, tree.children);
}

std::vector<TreePath> nonterminal_paths(const DerivationTree& tree) {
  std::vector<TreePath> out;
  TreePath path;
  collect_paths(tree, path, out);
  return out;
}

DerivationTree& node_at(DerivationTree& tree, const TreePath& path) {
  DerivationTree* node = &tree;
  for (std::size_t i : path) node = &node->children.at(i);
  return *node;
}

const DerivationTree& node_at(const DerivationTree& tree, const TreePath& path) {
  const DerivationTree* node = &tree;
  for (std::size_t i : path) node = &node->children.at(i);
  return *node;
}

}  // namespace tabfuzz
