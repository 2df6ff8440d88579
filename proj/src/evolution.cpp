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

#include "tabfuzz/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "tabfuzz/errors.hpp"

namespace tabfuzz {
namespace {

// Nonterminal ancestors of the node at `path`.
std::size_t nonterminal_depth(const DerivationTree& tree, const TreePath& path) {
  std::size_t depth = 0;
  const DerivationTree* node = &tree;
  for (std::size_t i : path) {
    if (node->kind == DerivationTree::Kind::kNonterminal) ++depth;
    node = &node->children[i];
  }
  return depth;
}

std::map<std::string, std::vector<TreePath>> paths_by_symbol(const DerivationTree& tree) {
  std::map<std::string, std::vector<TreePath>> out;
  for (TreePath& p : nonterminal_paths(tree)) {
    if (p.empty()) continue;
    const std::string& symbol = node_at(tree, p).symbol;
    out[symbol].push_back(std::move(p));
  }
  return out;
}

std::size_t tournament(const Population& pop, std::size_t size, Rng& rng) {
  std::size_t best = rng.uniform_index(pop.members.size());
  for (std::size_t i = 1; i < size; ++i) {
    const std::size_t challenger = rng.uniform_index(pop.members.size());
    if (pop.members[challenger].fitness.value > pop.members[best].fitness.value) best = challenger;
  }
  return best;
}

}  // namespace

void EvolutionConfig::validate() const {
  if (population_size < 1) throw ConfigError("population_size must be at least 1");
  if (!(elite_fraction > 0.0 && elite_fraction < 1.0)) {
    throw ConfigError("elite_fraction must lie strictly between 0 and 1");
  }
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
    throw ConfigError("mutation_rate must lie in [0, 1]");
  }
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
    throw ConfigError("crossover_rate must lie in [0, 1]");
  }
  if (tournament_size < 2) throw ConfigError("tournament_size must be at least 2");
  if (depth_budget < 1) throw ConfigError("depth budget must be at least 1");
}

std::size_t elite_count(const EvolutionConfig& config) {
  const auto n = static_cast<std::size_t>(
      std::floor(static_cast<double>(config.population_size) * config.elite_fraction + 1e-9));
  return std::min(config.population_size, std::max<std::size_t>(1, n));
}

Member make_member(DerivationTree tree, const ConstraintSet& constraints, bool fresh) {
  Member m;
  m.text = tree.to_string();
  m.tree = std::move(tree);
  m.fresh = fresh;
  try {
    m.row = tree_to_row(m.tree, constraints.schema());
    m.fitness = constraints.score(*m.row);
  } catch (const MalformedRow&) {
    m.row.reset();
    m.fitness = {};
  }
  return m;
}

void rescore(Member& m, const ConstraintSet& constraints) {
  m.fitness = {};
  if (!m.row) return;
  try {
    m.fitness = constraints.score(*m.row);
  } catch (const MalformedRow&) {
  }
}

void rescore(Population& population, const ConstraintSet& constraints) {
  for (Member& m : population.members) rescore(m, constraints);
}

DerivationTree mutate(const DerivationTree& tree, const Grammar& grammar, Rng& rng,
                      std::size_t depth_budget) {
  const std::vector<TreePath> paths = nonterminal_paths(tree);
  if (paths.empty()) return tree;
  const TreePath& path = paths[rng.uniform_index(paths.size())];
  DerivationTree out = tree;
  DerivationTree& node = node_at(out, path);
  const std::size_t used = nonterminal_depth(tree, path);
  const std::size_t budget =
      std::max(depth_budget > used ? depth_budget - used : 0, grammar.min_height(node.symbol));
  node = generate_random(grammar, node.symbol, rng, budget);
  return out;
}

std::pair<DerivationTree, DerivationTree> crossover(const DerivationTree& a,
                                                    const DerivationTree& b, const Grammar&,
                                                    Rng& rng) {
  const auto pa = paths_by_symbol(a);
  const auto pb = paths_by_symbol(b);
  std::vector<const std::string*> shared;
  for (const auto& [symbol, _] : pa) {
    if (pb.count(symbol)) shared.push_back(&symbol);
  }
  if (shared.empty()) return {a, b};
  const std::string& symbol = *shared[rng.uniform_index(shared.size())];
  const std::vector<TreePath>& in_a = pa.at(symbol);
  const std::vector<TreePath>& in_b = pb.at(symbol);
  // The k-th occurrence in a pairs with the k-th in b (wrapping), so equal
  // parents exchange equal subtrees.
  const std::size_t k = rng.uniform_index(in_a.size());
  const TreePath& path_a = in_a[k];
  const TreePath& path_b = in_b[k % in_b.size()];
  DerivationTree ca = a;
  DerivationTree cb = b;
  node_at(ca, path_a) = node_at(b, path_b);
  node_at(cb, path_b) = node_at(a, path_a);
  return {std::move(ca), std::move(cb)};
}

std::vector<std::size_t> ranking(const Population& population) {
  std::vector<std::size_t> order(population.members.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const Member& a = population.members[x];
    const Member& b = population.members[y];
    if (a.fitness.value != b.fitness.value) return a.fitness.value > b.fitness.value;
    return a.text < b.text;
  });
  return order;
}

Population evolve_step(const Population& population, const Grammar& grammar,
                       const ConstraintSet& constraints, const EvolutionConfig& config, Rng& rng) {
  config.validate();
  if (population.members.empty()) throw Error("cannot evolve an empty population");
  const std::size_t size = config.population_size;
  Population next;
  next.generation = population.generation + 1;
  next.members.reserve(size);

  const std::vector<std::size_t> order = ranking(population);
  const std::size_t elites = std::min(elite_count(config), order.size());
  for (std::size_t i = 0; i < elites; ++i) {
    Member m = population.members[order[i]];
    m.fresh = false;
    rescore(m, constraints);
    next.members.push_back(std::move(m));
  }

  std::vector<DerivationTree> children;
  while (next.members.size() + children.size() < size) {
    const DerivationTree& p1 = population.members[tournament(population, config.tournament_size, rng)].tree;
    const DerivationTree& p2 = population.members[tournament(population, config.tournament_size, rng)].tree;
    auto [c1, c2] = rng.bernoulli(config.crossover_rate) ? crossover(p1, p2, grammar, rng)
                                                         : std::make_pair(p1, p2);
    if (rng.bernoulli(config.mutation_rate)) c1 = mutate(c1, grammar, rng, config.depth_budget);
    children.push_back(std::move(c1));
    if (next.members.size() + children.size() < size) {
      if (rng.bernoulli(config.mutation_rate)) c2 = mutate(c2, grammar, rng, config.depth_budget);
      children.push_back(std::move(c2));
    }
  }
  for (DerivationTree& child : children) {
    next.members.push_back(make_member(std::move(child), constraints, true));
  }
  return next;
}

namespace {

std::vector<std::size_t> uniform_subset(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> chosen(n);
  for (std::size_t i = 0; i < n; ++i) chosen[i] = i;
  if (n > k) {
    for (std::size_t i = 0; i < k; ++i) std::swap(chosen[i], chosen[i + rng.uniform_index(n - i)]);
    chosen.resize(k);
    std::sort(chosen.begin(), chosen.end());
  }
  return chosen;
}

}  // namespace

Population seed_population(const std::vector<DerivationTree>& good, const Grammar& grammar,
                           const ConstraintSet& constraints, const EvolutionConfig& config,
                           Rng& rng) {
  config.validate();
  const std::size_t size = config.population_size;
  const std::vector<std::size_t> chosen = uniform_subset(good.size(), size, rng);
  Population pop;
  pop.members.reserve(size);
  for (std::size_t i : chosen) pop.members.push_back(make_member(good[i], constraints, false));
  while (pop.members.size() < size) {
    pop.members.push_back(make_member(
        generate_random(grammar, grammar.row_symbol(), rng, config.depth_budget), constraints, true));
  }
  return pop;
}

Population reseed(const Population& current, const std::vector<DerivationTree>& good,
                  const Grammar& grammar, const ConstraintSet& constraints, const EvolutionConfig& config, Rng& rng) {
  config.validate();
  const std::size_t size = config.population_size;
  Population pop;
  pop.generation = current.generation;
  pop.members.reserve(size);
  std::set<std::string> taken;
  for (std::size_t i : uniform_subset(good.size(), size, rng)) {
    pop.members.push_back(make_member(good[i], constraints, false));
    taken.insert(pop.members.back().text);
  }
  for (std::size_t i : ranking(current)) {
    if (pop.members.size() == size) break;
    const Member& m = current.members[i];
    if (!taken.insert(m.text).second) continue;
    Member copy = m;
    copy.fresh = false;
    pop.members.push_back(std::move(copy));
  }
  while (pop.members.size() < size) {
    pop.members.push_back(make_member(
        generate_random(grammar, grammar.row_symbol(), rng, config.depth_budget), constraints, true));
  }
  return pop;
}

std::optional<SampledRow> sample_static_row(const Grammar& grammar,
                                            const ConstraintSet& constraints, Rng& rng,
                                            std::size_t attempts,
                                            std::vector<std::size_t>* failures,
                                            std::size_t depth_budget) {
  const std::vector<StaticConstraint>& statics = constraints.statics();
  if (failures) failures->assign(statics.size(), 0);
  for (std::size_t i = 0; i < attempts; ++i) {
    DerivationTree tree = generate_random(grammar, grammar.row_symbol(), rng, depth_budget);
    RowRecord row;
    try {
      row = tree_to_row(tree, constraints.schema());
    } catch (const MalformedRow&) {
      continue;
    }
    bool ok = true;
    for (std::size_t c = 0; c < statics.size(); ++c) {
      bool holds = false;
      try {
        holds = eval_static(statics[c], row, constraints.schema());
      } catch (const MalformedRow&) {
      }
      if (!holds) {
        ok = false;
        if (failures) ++(*failures)[c];
      }
    }
    if (ok) return SampledRow{std::move(tree), std::move(row)};
  }
  return std::nullopt;
}

}  // namespace tabfuzz
