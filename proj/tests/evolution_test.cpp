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

#include <set>

#include <gtest/gtest.h>

#include "tabfuzz/errors.hpp"
#include "test_util.hpp"

namespace tabfuzz {
namespace {

using testing::census_grammar;

ConstraintSet statics_only(const Grammar& g) {
  return ConstraintSet(compile_constraints(g), std::nullopt, Encoder(schema_from_grammar(g)));
}

DerivationTree row_tree(const std::string& text) {
  const auto t = parse_tree(census_grammar(), "<row>", text);
  if (!t) throw std::runtime_error("not a row: " + text);
  return *t;
}

TEST(EvolutionTest, ConfigValidation) {
  EvolutionConfig c;
  EXPECT_NO_THROW(c.validate());
  c.elite_fraction = 1.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.tournament_size = 1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.mutation_rate = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(EvolutionTest, EliteCount) {
  EvolutionConfig c;
  c.population_size = 10;
  c.elite_fraction = 0.2;
  EXPECT_EQ(elite_count(c), 2u);
  c.population_size = 100;
  c.elite_fraction = 0.1;
  EXPECT_EQ(elite_count(c), 10u);
  c.population_size = 3;
  EXPECT_EQ(elite_count(c), 1u);
}

TEST(EvolutionTest, MutationOfTwoSentenceLanguage) {
  const Grammar g = parse_spec("<a> ::= '0' | '1'\n");
  Rng rng(1);
  const DerivationTree t = generate_random(g, "<a>", rng);
  std::set<std::string> seen;
  for (int i = 0; i < 100; ++i) {
    const std::string s = mutate(t, g, rng).to_string();
    EXPECT_TRUE(s == "0" || s == "1");
    seen.insert(s);
  }
  EXPECT_EQ(seen.size(), 2u);
}

TEST(EvolutionTest, MutationPreservesGrammarValidity) {
  const Grammar& g = census_grammar();
  Rng rng(2);
  DerivationTree t = row_tree("29, librarian, 9427");
  for (int i = 0; i < 1000; ++i) {
    t = mutate(t, g, rng);
    ASSERT_TRUE(is_valid(g, t));
    ASSERT_TRUE(recognizes(g, "<row>", t.to_string())) << t.to_string();
  }
}

TEST(EvolutionTest, MutationIsDeterministic) {
  const DerivationTree t = row_tree("29, librarian, 9427");
  Rng a(77), b(77);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(mutate(t, census_grammar(), a), mutate(t, census_grammar(), b));
}

// Every outcome of swapping one same-symbol pair of non-root subtrees.
std::set<std::pair<std::string, std::string>> all_swaps(const DerivationTree& a,
                                                        const DerivationTree& b) {
  std::set<std::pair<std::string, std::string>> out;
  for (const TreePath& pa : nonterminal_paths(a)) {
    for (const TreePath& pb : nonterminal_paths(b)) {
      if (pa.empty() || pb.empty() || node_at(a, pa).symbol != node_at(b, pb).symbol) continue;
      DerivationTree ca = a, cb = b;
      node_at(ca, pa) = node_at(b, pb);
      node_at(cb, pb) = node_at(a, pa);
      out.emplace(ca.to_string(), cb.to_string());
    }
  }
  return out;
}

TEST(EvolutionTest, CrossoverOutputsAreSubtreeSwaps) {
  const DerivationTree a = row_tree("29, librarian, 9427");
  const DerivationTree b = row_tree("45, president, 100");
  const auto swaps = all_swaps(a, b);
  ASSERT_TRUE(swaps.count({"45, librarian, 9427", "29, president, 100"}));
  bool saw_age_swap = false;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(seed);
    const auto [ca, cb] = crossover(a, b, census_grammar(), rng);
    ASSERT_TRUE(swaps.count({ca.to_string(), cb.to_string()}))
        << ca.to_string() << " / " << cb.to_string();
    EXPECT_TRUE(is_valid(census_grammar(), ca));
    EXPECT_TRUE(is_valid(census_grammar(), cb));
    saw_age_swap = saw_age_swap || (ca.to_string() == "45, librarian, 9427" &&
                                    cb.to_string() == "29, president, 100");
  }
  EXPECT_TRUE(saw_age_swap);
}

TEST(EvolutionTest, CrossoverOfIdenticalParentsIsIdentity) {
  const DerivationTree a = row_tree("29, librarian, 9427");
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto [ca, cb] = crossover(a, a, census_grammar(), rng);
    EXPECT_EQ(ca, a);
    EXPECT_EQ(cb, a);
  }
}

TEST(EvolutionTest, CrossoverWithOnlyTheRootSharedIsIdentity) {
  const Grammar g = parse_spec("<r> ::= <a> | <b>\n<a> ::= 'x'\n<b> ::= 'y'\n");
  const DerivationTree a = *parse_tree(g, "<r>", "x");
  const DerivationTree b = *parse_tree(g, "<r>", "y");
  Rng rng(1);
  const auto [ca, cb] = crossover(a, b, g, rng);
  EXPECT_EQ(ca, a);
  EXPECT_EQ(cb, b);
}

TEST(EvolutionTest, SeedPopulationSizes) {
  const Grammar& g = census_grammar();
  const ConstraintSet cs = statics_only(g);
  EvolutionConfig config;
  Rng rng(3);
  const Population empty_seeded = seed_population({}, g, cs, config, rng);
  EXPECT_EQ(empty_seeded.members.size(), 100u);
  for (const Member& m : empty_seeded.members) EXPECT_TRUE(m.fresh);

  std::vector<DerivationTree> good;
  std::set<std::string> good_text;
  for (int i = 0; i < 150; ++i) {
    good.push_back(row_tree(std::to_string(20 + i % 40) + ", librarian, " + std::to_string(i)));
    good_text.insert(good.back().to_string());
  }
  const std::vector<DerivationTree> hundred(good.begin(), good.begin() + 100);
  const Population exact = seed_population(hundred, g, cs, config, rng);
  ASSERT_EQ(exact.members.size(), 100u);
  for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(exact.members[i].tree, hundred[i]);

  const Population truncated = seed_population(good, g, cs, config, rng);
  ASSERT_EQ(truncated.members.size(), 100u);
  std::set<std::string> distinct;
  for (const Member& m : truncated.members) {
    EXPECT_TRUE(good_text.count(m.text));
    EXPECT_FALSE(m.fresh);
    distinct.insert(m.text);
  }
  EXPECT_EQ(distinct.size(), 100u);
}

TEST(EvolutionTest, ElitesAreCarriedUnchanged) {
  const Grammar& g = census_grammar();
  const ConstraintSet cs = statics_only(g);
  EvolutionConfig config;
  config.population_size = 10;
  config.elite_fraction = 0.2;
  Rng rng(5);
  const Population pop = seed_population({}, g, cs, config, rng);
  const std::vector<std::size_t> order = ranking(pop);
  const Population next = evolve_step(pop, g, cs, config, rng);
  ASSERT_EQ(next.members.size(), 10u);
  EXPECT_EQ(next.generation, 1u);
  EXPECT_EQ(next.members[0].tree, pop.members[order[0]].tree);
  EXPECT_EQ(next.members[1].tree, pop.members[order[1]].tree);
  EXPECT_FALSE(next.members[0].fresh);
  EXPECT_TRUE(next.members[2].fresh);
}

TEST(EvolutionTest, PerfectPopulationStaysPerfect) {
  const Grammar& g = census_grammar();
  const ConstraintSet cs(compile_constraints(g),
                         ClassifierConstraint{std::make_shared<ConstantClassifier>(kOriginalLabel)},
                         Encoder(schema_from_grammar(g)));
  std::vector<DerivationTree> good;
  for (int i = 0; i < 20; ++i) good.push_back(row_tree(std::to_string(20 + i) + ", president, 5"));
  EvolutionConfig config;
  config.population_size = 20;
  Rng rng(6);
  Population pop = seed_population(good, g, cs, config, rng);
  for (int step = 0; step < 10; ++step) {
    pop = evolve_step(pop, g, cs, config, rng);
    double best = 0;
    for (const Member& m : pop.members) best = std::max(best, m.fitness.value);
    EXPECT_EQ(best, 1.0);
  }
}

TEST(EvolutionTest, ReachesNarrowAgeWindow) {
  const Grammar g = parse_spec(
      "<row> ::= <age>\n<age> ::= <digit> | <digit> <digit>\n<digit> ::= '0' | ... | '9'\n"
      "where int(<age>) > 18 & int(<age>) < 20\n");
  const ConstraintSet cs = statics_only(g);
  // Brute force: the language is 0-9 and 00-99; only 19 qualifies.
  std::vector<std::string> language;
  for (int v = 0; v < 10; ++v) language.push_back(std::to_string(v));
  for (int v = 0; v < 100; ++v) language.push_back(std::to_string(v / 10) + std::to_string(v % 10));
  std::size_t satisfying = 0;
  for (const std::string& text : language) {
    const auto t = parse_tree(g, "<row>", text);
    ASSERT_TRUE(t.has_value()) << text;
    if (cs.score(tree_to_row(*t, cs.schema())).all_satisfied) ++satisfying;
  }
  ASSERT_EQ(satisfying, 1u);

  EvolutionConfig config;
  config.population_size = 20;
  int successes = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    Population pop = seed_population({}, g, cs, config, rng);
    bool found = false;
    for (int gen = 0; gen < 50 && !found; ++gen) {
      pop = evolve_step(pop, g, cs, config, rng);
      for (const Member& m : pop.members) found = found || m.fitness.value == 1.0;
    }
    successes += found ? 1 : 0;
  }
  EXPECT_GE(successes, 4);
}

TEST(EvolutionTest, BestFitnessNeverDropsAndMembersStayValid) {
  const Grammar& g = census_grammar();
  const ConstraintSet cs = statics_only(g);
  EvolutionConfig config;
  config.population_size = 30;
  Rng rng(8);
  Population pop = seed_population({}, g, cs, config, rng);
  double best = 0;
  for (const Member& m : pop.members) best = std::max(best, m.fitness.value);
  for (int step = 0; step < 30; ++step) {
    pop = evolve_step(pop, g, cs, config, rng);
    ASSERT_EQ(pop.members.size(), 30u);
    double now = 0;
    for (const Member& m : pop.members) {
      now = std::max(now, m.fitness.value);
      ASSERT_TRUE(is_valid(g, m.tree));
    }
    EXPECT_GE(now, best);
    best = now;
  }
}

TEST(EvolutionTest, WholeRunIsDeterministic) {
  const Grammar& g = census_grammar();
  const ConstraintSet cs = statics_only(g);
  EvolutionConfig config;
  config.population_size = 25;
  auto run = [&](std::uint64_t seed) {
    Rng rng(seed);
    Population pop = seed_population({}, g, cs, config, rng);
    for (int i = 0; i < 15; ++i) pop = evolve_step(pop, g, cs, config, rng);
    std::string all;
    for (const Member& m : pop.members) all += m.text + "\n";
    return all;
  };
  EXPECT_EQ(run(10), run(10));
  EXPECT_NE(run(10), run(11));
}

TEST(EvolutionTest, ReseedPutsGoodSamplesFirstAndKeepsBestOfCurrent) {
  const Grammar& g = census_grammar();
  const ConstraintSet cs = statics_only(g);
  EvolutionConfig config;
  config.population_size = 10;
  Rng rng(12);
  const Population current = seed_population({}, g, cs, config, rng);
  const std::vector<DerivationTree> good = {row_tree("30, librarian, 1"),
                                            row_tree("31, president, 2")};
  const Population pop = reseed(current, good, g, cs, config, rng);
  ASSERT_EQ(pop.members.size(), 10u);
  EXPECT_EQ(pop.members[0].tree, good[0]);
  EXPECT_EQ(pop.members[1].tree, good[1]);
  const std::vector<std::size_t> order = ranking(current);
  std::set<std::string> texts;
  for (const Member& m : pop.members) {
    EXPECT_FALSE(m.fresh);
    texts.insert(m.text);
  }
  EXPECT_EQ(texts.size(), 10u);
  EXPECT_TRUE(texts.count(current.members[order[0]].text));

  std::vector<DerivationTree> many;
  for (int i = 0; i < 25; ++i) many.push_back(row_tree("40, neurosurgeon, " + std::to_string(i)));
  const Population full = reseed(current, many, g, cs, config, rng);
  ASSERT_EQ(full.members.size(), 10u);
  for (const Member& m : full.members) EXPECT_EQ(m.text.rfind("40, neurosurgeon, ", 0), 0u);
}

}  // namespace
}  // namespace tabfuzz
