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
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "qstc/error.hpp"
#include "qstc/evolution.hpp"
#include "qstc/harness.hpp"

namespace qstc {
namespace {

GaConfig quick_ga() {
  GaConfig c;
  c.population_size = 48;
  c.parents_mating = 12;
  c.keep_elitism = 4;
  c.max_generations = 15;
  c.saturation = 5;
  return c;
}

TEST(Stats, PopulationStd) {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  EXPECT_DOUBLE_EQ(mean_of(v), 2.5);
  EXPECT_DOUBLE_EQ(population_std(v), std::sqrt(1.25));
  EXPECT_EQ(population_std(std::vector<double>{3.0}), 0.0);
  EXPECT_EQ(mean_of(std::vector<double>{}), 0.0);
}

TEST(MultiSeed, SingleSeedHasZeroSpread) {
  const std::vector<int> lengths{5};
  const ChainSpec base{2, 1.0, 0.15, 100.0};
  const MultiSeedSummary s = multi_seed_ga(lengths, quick_ga(),
                                           ActionSetKind::kSiteBySite, base, 1,
                                           3, WorkerPool(1));
  ASSERT_EQ(s.lengths.size(), 1u);
  EXPECT_EQ(s.lengths[0].best, s.lengths[0].mean);
  EXPECT_EQ(s.lengths[0].std, 0.0);
}

TEST(MultiSeed, BestIsMaxOfRecomputedSeeds) {
  const std::vector<int> lengths{4, 6};
  const ChainSpec base{2, 1.0, 0.15, 100.0};
  const MultiSeedSummary s = scaling_study(lengths, quick_ga(), base, 4, 8,
                                           WorkerPool(2));
  for (const LengthSummary& l : s.lengths) {
    ChainSpec spec = base;
    spec.n = l.n;
    const PropagatorCache cache =
        PropagatorCache::build(ActionSet::site_by_site(l.n, 100.0), spec);
    double best = 0.0;
    int halts = 0;
    for (const SeedResult& r : l.seeds) {
      const Trajectory t = evolve_sequence(r.best_sequence, cache);
      EXPECT_EQ(t.max_probability, r.max_probability);
      EXPECT_EQ(t.argmax_step, r.argmax_step);
      best = std::max(best, t.max_probability);
    }
    for (int h : l.halt_counts) halts += h;
    EXPECT_EQ(halts, 4);
    EXPECT_EQ(l.best, best);
    EXPECT_GE(l.best, l.mean);
    EXPECT_EQ(l.n_steps, 5 * l.n);
  }
}

TEST(MultiSeed, IndependentOfWorkerCount) {
  const std::vector<int> lengths{5};
  const ChainSpec base{2, 1.0, 0.15, 100.0};
  const auto a = scaling_study(lengths, quick_ga(), base, 3, 1, WorkerPool(1));
  const auto b = scaling_study(lengths, quick_ga(), base, 3, 1, WorkerPool(3));
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a.lengths[0].seeds[i].best_sequence, b.lengths[0].seeds[i].best_sequence);
  }
}

TEST(Sweep, CellsInRangeAndDuplicatesAgree) {
  const std::vector<double> h{10.0, 100.0, 10.0};
  const std::vector<double> dt{0.15, 0.3};
  const SweepResult r = sweep_h_dt(5, h, dt, quick_ga(), ActionSetKind::kSiteBySite,
                                   1.0, 4, WorkerPool(2));
  ASSERT_EQ(r.cells.size(), 6u);
  for (const SweepCell& c : r.cells) {
    EXPECT_GE(c.max_probability, 0.0);
    EXPECT_LE(c.max_probability, 1.0 + 1e-12);
    EXPECT_EQ(c.n_steps, transfer_steps(5, c.dt));
  }
  for (std::size_t j = 0; j < dt.size(); ++j) {
    EXPECT_EQ(r.at(0, j).max_probability, r.at(2, j).max_probability);
  }
  EXPECT_EQ(r.at(1, 0).h, 100.0);
  EXPECT_EQ(r.at(1, 1).dt, 0.3);
  const std::vector<double> bad{-1.0};
  EXPECT_THROW(sweep_h_dt(5, bad, dt, quick_ga(), ActionSetKind::kSiteBySite, 1.0,
                          4, WorkerPool(1)),
               InvalidArgument);
}

TEST(Validation, NoiselessCellsAndShape) {
  const ChainSpec spec{6, 1.0, 0.15, 100.0};
  const PropagatorCache cache =
      PropagatorCache::build(ActionSet::site_by_site(6, 100.0), spec);
  RandomStream pick(2, 2);
  ControlSequence seq(30);
  for (ActionId& a : seq) a = static_cast<ActionId>(pick.below(7));
  const double clean = evolve_sequence(seq, cache).max_probability;

  NoiseGrid grid;
  grid.p_values = {0.0, 0.5, 1.0};
  grid.delta_values = {0.0, 0.3};
  const ValidationReport r = validate_controller(FixedSequenceController{seq}, cache,
                                                 grid, 20, 5, WorkerPool(2));
  ASSERT_EQ(r.cells.size(), 6u);
  for (const ValidationCell& c : r.cells) {
    ASSERT_EQ(c.max_probabilities.size(), 20u);
    EXPECT_GE(c.mean_max_probability, 0.0);
    EXPECT_LE(c.mean_max_probability, 1.0);
    EXPECT_GE(c.std_max_probability, 0.0);
  }
  for (std::size_t d = 0; d < 2; ++d) {
    EXPECT_EQ(r.at(0, d).mean_max_probability, clean);
    EXPECT_EQ(r.at(0, d).std_max_probability, 0.0);
  }
  EXPECT_EQ(r.at(2, 0).mean_max_probability, clean);
  EXPECT_EQ(r.at(2, 0).std_max_probability, 0.0);
  EXPECT_GT(r.at(2, 1).std_max_probability, 0.0);
}

TEST(Validation, ReproducibleAndAgentArm) {
  const ChainSpec spec{4, 1.0, 0.15, 100.0};
  const PropagatorCache cache =
      PropagatorCache::build(ActionSet::site_by_site(4, 100.0), spec);
  RandomStream rng(6, 6);
  const GreedyAgentController agent{QNetwork({8, 9, 3, 5}, rng), 20};
  NoiseGrid grid;
  grid.p_values = {0.25};
  grid.delta_values = {0.25};
  const auto a = validate_controller(agent, cache, grid, 10, 1, WorkerPool(1));
  const auto b = validate_controller(agent, cache, grid, 10, 1, WorkerPool(3));
  EXPECT_EQ(a.cells[0].max_probabilities, b.cells[0].max_probabilities);
  EXPECT_THROW(validate_controller(agent, cache, grid, 0, 1, WorkerPool(1)),
               InvalidArgument);
}

TEST(Histogram, CountsMatchHarvest) {
  const ChainSpec spec{4, 1.0, 0.15, 100.0};
  const ActionHistogram h = action_histogram(spec, ActionSetKind::kSiteBySite, 20,
                                             0.9, quick_ga(), 10, 3, WorkerPool(2));
  ASSERT_EQ(h.counts.size(), 5u);
  const auto total = std::accumulate(h.counts.begin(), h.counts.end(), std::int64_t{0});
  EXPECT_EQ(total, static_cast<std::int64_t>(h.harvested) * h.n_steps);
  EXPECT_LE(h.harvested, h.requested);
  EXPECT_EQ(h.quota_met(), h.harvested == 20);
  double share = 0.0;
  for (ActionId a = 0; a < 5; ++a) share += h.share(a);
  if (total > 0) EXPECT_NEAR(share, 1.0, 1e-12);
}

TEST(Histogram, UnreachableThresholdIsPartial) {
  const ChainSpec spec{4, 1.0, 0.15, 100.0};
  const ActionHistogram h = action_histogram(spec, ActionSetKind::kSiteBySite, 5,
                                             1.5, quick_ga(), 2, 3, WorkerPool(1));
  EXPECT_FALSE(h.quota_met());
  EXPECT_EQ(h.harvested, 0);
  EXPECT_EQ(h.shortfall(), 5);
  EXPECT_EQ(h.runs_used, 2);
}

TEST(Histogram, StepOverride) {
  const ChainSpec spec{4, 1.0, 0.15, 100.0};
  const ActionHistogram h = action_histogram(spec, ActionSetKind::kSiteBySite, 10,
                                             0.5, quick_ga(), 4, 3, WorkerPool(1), 12);
  EXPECT_EQ(h.n_steps, 12);
  const auto total = std::accumulate(h.counts.begin(), h.counts.end(), std::int64_t{0});
  EXPECT_EQ(total, static_cast<std::int64_t>(h.harvested) * 12);
}

TEST(Histogram, IndependentOfWorkerCount) {
  const ChainSpec spec{4, 1.0, 0.15, 100.0};
  const auto a = action_histogram(spec, ActionSetKind::kSiteBySite, 30, 0.9,
                                  quick_ga(), 6, 2, WorkerPool(1));
  const auto b = action_histogram(spec, ActionSetKind::kSiteBySite, 30, 0.9,
                                  quick_ga(), 6, 2, WorkerPool(4));
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_EQ(a.harvested, b.harvested);
}

TEST(Hpo, RangesAndSelection) {
  const ChainSpec spec{4, 1.0, 0.15, 100.0};
  const ActionSet set = ActionSet::site_by_site(4, 100.0);
  DqnConfig base;
  base.minibatch = 8;
  SearchRanges ranges;
  ranges.hidden1_min = 8;
  ranges.hidden1_max = 24;
  const HpoResult r = hyperparameter_search(base, set, spec, 4, ranges, 20, 5,
                                            NoiseModel{0.25, 0.25}, 1, WorkerPool(2));
  ASSERT_EQ(r.trials.size(), 4u);
  for (const HpoTrial& t : r.trials) {
    EXPECT_GE(t.gamma, ranges.gamma_min);
    EXPECT_LE(t.gamma, ranges.gamma_max);
    EXPECT_GE(t.learning_rate, ranges.learning_rate_min);
    EXPECT_LE(t.learning_rate, ranges.learning_rate_max);
    EXPECT_GE(t.hidden1, ranges.hidden1_min);
    EXPECT_LE(t.hidden1, ranges.hidden1_max);
    EXPECT_GE(r.trials[r.winner].validation_mean, t.validation_mean);
  }
  EXPECT_EQ(r.best_config.hidden1, r.trials[r.winner].hidden1);
  const HpoResult one = hyperparameter_search(base, set, spec, 1, ranges, 10, 2,
                                              NoiseModel{0.25, 0.25}, 1, WorkerPool(1));
  EXPECT_EQ(one.winner, 0);
}

}  // namespace
}  // namespace qstc
