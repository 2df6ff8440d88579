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

#ifndef TABFUZZ_EVOLUTION_HPP_
#define TABFUZZ_EVOLUTION_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tabfuzz/constraints.hpp"
#include "tabfuzz/derivation.hpp"
#include "tabfuzz/grammar.hpp"
#include "tabfuzz/rng.hpp"
#include "tabfuzz/row.hpp"

namespace tabfuzz {

struct EvolutionConfig {
  std::size_t population_size = 100;
  double elite_fraction = 0.1;
  double mutation_rate = 0.8;
  double crossover_rate = 0.6;
  std::size_t tournament_size = 3;
  std::size_t depth_budget = kDefaultDepthBudget;

  // Throws ConfigError naming the offending field.
  void validate() const;
};

// max(1, floor(population_size * elite_fraction)).
std::size_t elite_count(const EvolutionConfig& config);

struct Member {
  DerivationTree tree;
  std::string text;
  // Empty when the tree does not spell a well-formed row.
  std::optional<RowRecord> row;
  FitnessScore fitness;
  // Produced by generation or variation in this step, as opposed to carried
  // over (elites) or supplied (seeded good samples).
  bool fresh = true;
};

struct Population {
  std::vector<Member> members;
  std::size_t generation = 0;
};

// Builds a member from a row tree and scores it. Rows that fail to convert
// score 0.
Member make_member(DerivationTree tree, const ConstraintSet& constraints, bool fresh);
void rescore(Member& member, const ConstraintSet& constraints);
void rescore(Population& population, const ConstraintSet& constraints);

// Regenerates the subtree under a uniformly chosen nonterminal node, the
// root included.
DerivationTree mutate(const DerivationTree& tree, const Grammar& grammar, Rng& rng,
                      std::size_t depth_budget = kDefaultDepthBudget);

// Swaps one pair of subtrees rooted at a nonterminal that occurs below the
// root in both parents. The symbol is drawn uniformly from the shared ones,
// then an occurrence uniformly in `a`, paired with the occurrence of the same
// preorder rank in `b` (modulo its count). Returns the parents unchanged
// when they share no such symbol.
std::pair<DerivationTree, DerivationTree> crossover(const DerivationTree& a,
                                                    const DerivationTree& b,
                                                    const Grammar& grammar, Rng& rng);

// One generation: elites are copied unchanged (best fitness first, ties by
// serialized text); the rest come from tournament selection, crossover and
// mutation. Everything is rescored.
Population evolve_step(const Population& population, const Grammar& grammar,
                       const ConstraintSet& constraints, const EvolutionConfig& config, Rng& rng);

// All of `good` (a uniform subset if there are too many), topped up with
// random rows.
Population seed_population(const std::vector<DerivationTree>& good, const Grammar& grammar,
                           const ConstraintSet& constraints, const EvolutionConfig& config,
                           Rng& rng);

// Up to population_size of `good` (a uniform subset if there are more),
// followed by the best-ranked members of `current` not already present, then
// random rows if still short. Carried members are marked not fresh.
Population reseed(const Population& current, const std::vector<DerivationTree>& good,
                  const Grammar& grammar, const ConstraintSet& constraints,
                  const EvolutionConfig& config, Rng& rng);

struct SampledRow {
  DerivationTree tree;
  RowRecord row;
};

// Rejection-samples a random row whose static constraints all hold, giving up
// after `attempts` draws. When `failures` is given, it is resized to the
// number of static constraints and counts how often each one failed.
std::optional<SampledRow> sample_static_row(const Grammar& grammar,
                                            const ConstraintSet& constraints, Rng& rng,
                                            std::size_t attempts,
                                            std::vector<std::size_t>* failures = nullptr,
                                            std::size_t depth_budget = kDefaultDepthBudget);

// Index order of members by fitness descending, then text ascending.
std::vector<std::size_t> ranking(const Population& population);

}  // namespace tabfuzz

#endif  // TABFUZZ_EVOLUTION_HPP_
