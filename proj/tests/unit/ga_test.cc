// Copyright 2026 The qstc Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include <gtest/gtest.h>

#include "qstc/error.hpp"
#include "qstc/evolution.hpp"
#include "qstc/ga.hpp"
#include "qstc/parallel.hpp"

namespace qstc {
namespace {

GaConfig small_config() {
  GaConfig c;
  c.population_size = 64;
  c.parents_mating = 16;
  c.keep_elitism = 4;
  c.max_generations = 40;
  c.saturation = 10;
  c.n_seeds = 1;
  return c;
}

Chromosome with_fitness(double f) { return Chromosome{{0}, f}; }

TEST(GaConfig, DefaultsAndScaling) {
  GaConfig c;
  EXPECT_EQ(c.population_size, 4096);
  EXPECT_EQ(c.max_generations, 1000);
  EXPECT_EQ(c.saturation, 30);
  EXPECT_EQ(c.parents_mating, 409);
  EXPECT_EQ(c.keep_elitism, 409);
  EXPECT_EQ(c.crossover_probability, 0.8);
  EXPECT_EQ(c.mutation_probability, 0.99);
  EXPECT_EQ(c.target_probability, 0.99);
  EXPECT_FALSE(c.mutated_genes.has_value());
  const GaConfig s = c.scaled_to(512);
  EXPECT_EQ(s.population_size, 512);
  EXPECT_EQ(s.parents_mating, 51);
  EXPECT_EQ(s.keep_elitism, 51);
  EXPECT_NO_THROW(s.validate());
  EXPECT_EQ(c.resolved_mutated_genes(32, 160), 32);
  c.mutated_genes = 500;
  EXPECT_EQ(c.resolved_mutated_genes(32, 160), 160);
}

TEST(GaConfig, Validation) {
  GaConfig c = small_config();
  c.parents_mating = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = small_config();
  c.keep_elitism = c.parents_mating + 1;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = small_config();
  c.crossover_probability = 1.5;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = small_config();
  c.population_size = 1;
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(SelectParents, SortsDescendingWithStableTies) {
  Population pop{with_fitness(0.2), with_fitness(0.9), with_fitness(0.5),
                 with_fitness(0.9), with_fitness(0.1)};
  const auto idx = select_parents_sss(pop, 4);
  EXPECT_EQ(idx, (std::vector<std::size_t>{1, 3, 2, 0}));
  EXPECT_THROW(select_parents_sss(pop, 6), InvalidArgument);
  pop[2].fitness.reset();
  EXPECT_THROW(select_parents_sss(pop, 2), InvalidArgument);
}

TEST(UniformCrossover, GeneSourceFraction) {
  const std::size_t length = 10000;
  Chromosome a{ControlSequence(length, 0), std::nullopt};
  Chromosome b{ControlSequence(length, 1), std::nullopt};
  RandomStream rng(4, 4);
  const Chromosome child = uniform_crossover(a, b, 1.0, rng);
  const double from_b =
      std::count(child.genes.begin(), child.genes.end(), 1) / double(length);
  EXPECT_NEAR(from_b, 0.5, 0.015);
}

TEST(UniformCrossover, ProbabilityZeroCopiesFirstParent) {
  Chromosome a{{1, 2, 3, 4}, 0.3};
  Chromosome b{{5, 6, 7, 8}, 0.4};
  RandomStream rng(1, 1);
  const Chromosome child = uniform_crossover(a, b, 0.0, rng);
  EXPECT_EQ(child.genes, a.genes);
  EXPECT_FALSE(child.fitness.has_value());
  Chromosome c{{1, 2}, std::nullopt};
  EXPECT_THROW(uniform_crossover(a, c, 1.0, rng), InvalidArgument);
}

TEST(UniformCrossover, EachPositionFromAParent) {
  RandomStream rng(9, 9);
  Chromosome a{{0, 1, 2, 3, 4, 5}, std::nullopt};
  Chromosome b{{6, 7, 8, 9, 10, 11}, std::nullopt};
  for (int t = 0; t < 100; ++t) {
    const Chromosome c = uniform_crossover(a, b, 0.8, rng);
    for (std::size_t i = 0; i < c.genes.size(); ++i) {
      EXPECT_TRUE(c.genes[i] == a.genes[i] || c.genes[i] == b.genes[i]);
    }
  }
}

TEST(SwapMutation, PreservesMultiset) {
  RandomStream rng(3, 3);
  for (int t = 0; t < 200; ++t) {
    Chromosome c;
    c.genes.resize(1 + rng.below(60));
    for (ActionId& g : c.genes) g = static_cast<ActionId>(rng.below(9));
    const int k = static_cast<int>(rng.below(c.genes.size() + 1));
    const Chromosome m = swap_mutation(c, 1.0, k, rng);
    auto x = c.genes;
    auto y = m.genes;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    EXPECT_EQ(x, y);
  }
}

TEST(SwapMutation, SwapCountAndProbability) {
  RandomStream rng(6, 6);
  ControlSequence distinct(20);
  for (int i = 0; i < 20; ++i) distinct[i] = i;
  // One swap of distinct genes moves exactly two positions.
  const Chromosome m = swap_mutation(Chromosome{distinct, 0.5}, 1.0, 2, rng);
  int moved = 0;
  for (int i = 0; i < 20; ++i) moved += m.genes[i] != i;
  EXPECT_EQ(moved, 2);
  EXPECT_FALSE(m.fitness.has_value());
  const Chromosome same = swap_mutation(Chromosome{distinct, 0.5}, 0.0, 20, rng);
  EXPECT_EQ(same.genes, distinct);
  EXPECT_EQ(same.fitness, 0.5);
  EXPECT_THROW(swap_mutation(Chromosome{distinct, 0.5}, 1.0, 21, rng),
               InvalidArgument);
}

TEST(RunGa, MatchesExhaustiveOptimum) {
  const ChainSpec spec{3, 1.0, 0.15, 100.0};
  const ActionSet set = ActionSet::site_by_site(3, 100.0);
  const PropagatorCache cache = PropagatorCache::build(set, spec);
  double best = 0.0;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        const ControlSequence seq{a, b, c};
        best = std::max(best, evolve_sequence(seq, cache).max_probability);
      }
    }
  }
  GaConfig config = small_config();
  config.target_probability = 1.0;
  GaRunOptions options;
  options.n_steps = 3;
  const GaRunRecord r = run_ga(config, set, spec, std::nullopt, 5, options);
  EXPECT_NEAR(*r.best.fitness, best, 1e-12);
  EXPECT_NEAR(evolve_sequence(r.best.genes, cache).max_probability,
              *r.best.fitness, 1e-15);
}

TEST(RunGa, BestIsMonotoneAndRecorded) {
  const ChainSpec spec{6, 1.0, 0.15, 100.0};
  const ActionSet set = ActionSet::site_by_site(6, 100.0);
  const GaRunRecord r = run_ga(small_config(), set, spec, std::nullopt, 11);
  ASSERT_EQ(r.best_fitness_per_generation.size(),
            static_cast<std::size_t>(r.generations_run));
  for (std::size_t g = 1; g < r.best_fitness_per_generation.size(); ++g) {
    EXPECT_GE(r.best_fitness_per_generation[g],
              r.best_fitness_per_generation[g - 1]);
  }
  for (std::size_t g = 0; g < r.mean_fitness_per_generation.size(); ++g) {
    EXPECT_LE(r.mean_fitness_per_generation[g],
              r.best_fitness_per_generation[g] + 1e-15);
  }
  EXPECT_EQ(*r.best.fitness, r.best_fitness_per_generation.back());
  EXPECT_EQ(r.best.genes.size(), 30u);
}

TEST(RunGa, HaltReasons) {
  const ChainSpec spec{4, 1.0, 0.15, 100.0};
  const ActionSet set = ActionSet::site_by_site(4, 100.0);
  GaConfig c = small_config();
  c.target_probability = 0.0;
  EXPECT_EQ(run_ga(c, set, spec, std::nullopt, 1).halt_reason,
            HaltReason::kTargetReached);
  EXPECT_EQ(run_ga(c, set, spec, std::nullopt, 1).generations_run, 1);

  c = small_config();
  c.target_probability = 1.1;
  c.saturation = 3;
  c.max_generations = 1000;
  const GaRunRecord sat = run_ga(c, set, spec, std::nullopt, 1);
  EXPECT_EQ(sat.halt_reason, HaltReason::kSaturation);
  const auto& best = sat.best_fitness_per_generation;
  EXPECT_EQ(best[best.size() - 1], best[best.size() - 1 - c.saturation]);

  c.saturation = 1000;
  c.max_generations = 5;
  const GaRunRecord cap = run_ga(c, set, spec, std::nullopt, 1);
  EXPECT_EQ(cap.halt_reason, HaltReason::kMaxGenerations);
  EXPECT_EQ(cap.generations_run, 5);
}

TEST(RunGa, OffspringHookSeesMultisetPreservingMutation) {
  const ChainSpec spec{5, 1.0, 0.15, 100.0};
  const ActionSet set = ActionSet::site_by_site(5, 100.0);
  GaRunOptions options;
  int calls = 0;
  options.on_offspring = [&](const Chromosome& child, const Chromosome& mutant) {
    ++calls;
    auto x = child.genes;
    auto y = mutant.genes;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    EXPECT_EQ(x, y);
  };
  GaConfig c = small_config();
  c.max_generations = 3;
  c.target_probability = 1.1;
  run_ga(c, set, spec, std::nullopt, 2, options);
  EXPECT_EQ(calls, 2 * (c.population_size - c.keep_elitism));
}

TEST(RunGa, ReproducibleAcrossWorkerCounts) {
  const ChainSpec spec{6, 1.0, 0.15, 100.0};
  const ActionSet set = ActionSet::site_by_site(6, 100.0);
  const NoiseModel noise{0.3, 0.3};
  const GaRunRecord a = run_ga(small_config(), set, spec, noise, 77);
  const WorkerPool pool(4);
  GaRunOptions options;
  options.pool = &pool;
  const GaRunRecord b = run_ga(small_config(), set, spec, noise, 77, options);
  EXPECT_EQ(a.best.genes, b.best.genes);
  EXPECT_EQ(a.best_fitness_per_generation, b.best_fitness_per_generation);
  EXPECT_EQ(a.mean_fitness_per_generation, b.mean_fitness_per_generation);
  const GaRunRecord c = run_ga(small_config(), set, spec, noise, 78);
  EXPECT_NE(a.best_fitness_per_generation, c.best_fitness_per_generation);
}

TEST(RunGa, FinalPopulationKept) {
  const ChainSpec spec{4, 1.0, 0.15, 100.0};
  const ActionSet set = ActionSet::site_by_site(4, 100.0);
  GaRunOptions options;
  options.keep_final_population = true;
  const GaRunRecord r = run_ga(small_config(), set, spec, std::nullopt, 3, options);
  ASSERT_EQ(r.final_population.size(), 64u);
  for (const Chromosome& c : r.final_population) {
    ASSERT_TRUE(c.fitness.has_value());
    EXPECT_LE(*c.fitness, *r.best.fitness);
  }
}

TEST(WorkerPool, RunsEveryIndexAndPropagatesErrors) {
  const WorkerPool pool(3);
  std::vector<int> hits(1000, 0);
  pool.parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(pool.parallel_for(10,
                                 [](std::size_t i) {
                                   if (i == 7) throw InvalidArgument("boom");
                                 }),
               InvalidArgument);
  EXPECT_GE(WorkerPool(0).size(), 1);
}

}  // namespace
}  // namespace qstc
