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

#ifndef QSTC_HARNESS_HPP_
#define QSTC_HARNESS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "qstc/actions.hpp"
#include "qstc/chain.hpp"
#include "qstc/dqn.hpp"
#include "qstc/ga.hpp"
#include "qstc/noise.hpp"
#include "qstc/parallel.hpp"
#include "qstc/qnetwork.hpp"

namespace qstc {

// Population standard deviation; 0 for fewer than two values.
double population_std(std::span<const double> values);
double mean_of(std::span<const double> values);

// ---------------------------------------------------------------------------
// Multi-seed GA studies

struct SeedResult {
  std::uint64_t seed = 0;
  double max_probability = 0.0;
  int argmax_step = 0;
  HaltReason halt_reason = HaltReason::kMaxGenerations;
  int generations_run = 0;
  ControlSequence best_sequence;
  double wall_time_seconds = 0.0;
};

struct LengthSummary {
  int n = 0;
  int n_steps = 0;
  double best = 0.0;  // max over seeds
  double mean = 0.0;  // mean over seeds of the per-seed maximum
  double std = 0.0;   // population std of the per-seed maxima
  std::size_t best_seed = 0;
  // Indexed by HaltReason.
  std::array<int, 3> halt_counts{};
  std::vector<SeedResult> seeds;
};

struct MultiSeedSummary {
  ActionSetKind kind = ActionSetKind::kSiteBySite;
  int n_seeds = 0;
  std::vector<LengthSummary> lengths;
};

// Seed s of length n runs with derive_stream_id({master_seed, "ga.seed", n, s}).
std::uint64_t ga_run_seed(std::uint64_t master_seed, int n, int seed_index);

// One noiseless run_ga per (length, seed); `base` supplies J, dt and h.
// Runs execute as independent jobs on `pool`.
MultiSeedSummary multi_seed_ga(std::span<const int> lengths,
                               const GaConfig& config, ActionSetKind kind,
                               const ChainSpec& base, int n_seeds,
                               std::uint64_t master_seed,
                               const WorkerPool& pool);

// Large-N study at fixed dt with site-by-site actions. Same record as
// multi_seed_ga; halt reasons are tallied per length.
MultiSeedSummary scaling_study(std::span<const int> lengths,
                               const GaConfig& config, const ChainSpec& base,
                               int n_seeds, std::uint64_t master_seed,
                               const WorkerPool& pool);

// ---------------------------------------------------------------------------
// h / dt sweep

struct SweepCell {
  double h = 0.0;
  double dt = 0.0;
  int n_steps = 0;
  double max_probability = 0.0;
  HaltReason halt_reason = HaltReason::kMaxGenerations;
};

struct SweepResult {
  int n = 0;
  std::vector<double> h_values;
  std::vector<double> dt_values;
  std::vector<SweepCell> cells;  // h-major: cells[i * dt_values.size() + j]

  const SweepCell& at(std::size_t h_index, std::size_t dt_index) const {
    return cells[h_index * dt_values.size() + dt_index];
  }
};

// One GA run per cell, seeded from (master_seed, h, dt) so duplicated cells
// reproduce each other.
SweepResult sweep_h_dt(int n, std::span<const double> h_values,
                       std::span<const double> dt_values,
                       const GaConfig& config, ActionSetKind kind,
                       double coupling, std::uint64_t master_seed,
                       const WorkerPool& pool);

// ---------------------------------------------------------------------------
// Noise validation

struct NoiseGrid {
  std::vector<double> p_values{0.0, 0.125, 0.25, 0.5};
  std::vector<double> delta_values{0.0, 0.125, 0.25, 0.5};
};

struct ValidationCell {
  double p = 0.0;
  double delta = 0.0;
  double mean_max_probability = 0.0;
  double std_max_probability = 0.0;
  std::vector<double> max_probabilities;  // one per run
};

struct ValidationReport {
  int runs = 0;
  NoiseGrid grid;
  std::vector<ValidationCell> cells;  // p-major

  const ValidationCell& at(std::size_t p_index, std::size_t delta_index) const {
    return cells[p_index * grid.delta_values.size() + delta_index];
  }
};

// A GA design: the same sequence is replayed under every noise realisation.
struct FixedSequenceController {
  ControlSequence sequence;
};

// A trained agent: actions are re-chosen greedily from the realised state.
struct GreedyAgentController {
  QNetwork network;
  int n_steps = 0;
};

using Controller = std::variant<FixedSequenceController, GreedyAgentController>;

// `runs` noisy episodes from |1> per grid cell; run r of cell c draws from
// stream derive_stream_id({"validate", c, r}) under `seed`.
ValidationReport validate_controller(const Controller& controller,
                                     const PropagatorCache& cache,
                                     const NoiseGrid& grid, int runs,
                                     std::uint64_t seed,
                                     const WorkerPool& pool);

// ---------------------------------------------------------------------------
// Action histogram of successful GA designs

struct ActionHistogram {
  int n = 0;
  int n_steps = 0;
  double threshold = 0.0;
  int requested = 0;
  int harvested = 0;   // sequences counted (== requested when the quota is met)
  int runs_used = 0;
  std::vector<std::int64_t> counts;  // indexed by action id

  bool quota_met() const { return harvested == requested; }
  int shortfall() const { return requested - harvested; }
  double share(ActionId id) const;
};

// Runs GA seeds in order and harvests every distinct chromosome of each final
// population with fitness >= threshold until `n_sequences` are collected or
// `max_runs` runs are spent.
ActionHistogram action_histogram(const ChainSpec& spec, ActionSetKind kind,
                                 int n_sequences, double threshold,
                                 const GaConfig& config, int max_runs,
                                 std::uint64_t master_seed,
                                 const WorkerPool& pool,
                                 std::optional<int> n_steps = std::nullopt);

// ---------------------------------------------------------------------------
// DQN random search

struct SearchRanges {
  double gamma_min = 0.95;
  double gamma_max = 1.0;
  double learning_rate_min = 1e-5;  // sampled log-uniformly
  double learning_rate_max = 1e-2;
  int hidden1_min = 512;
  int hidden1_max = 4096;
};

struct HpoTrial {
  int index = 0;
  double gamma = 0.0;
  double learning_rate = 0.0;
  int hidden1 = 0;
  int hidden2 = 0;
  double train_best = 0.0;
  double validation_mean = 0.0;
  double validation_std = 0.0;
};

struct HpoResult {
  std::vector<HpoTrial> trials;
  int winner = 0;
  DqnConfig best_config;
};

// Uniform random search over gamma, learning rate (log scale) and hidden1
// (hidden2 = round(hidden1/3)). Each trial trains for train_episodes under
// `noise` and is scored by the mean max P of val_episodes greedy rollouts
// under the same noise; the highest mean wins, ties to the lower index.
HpoResult hyperparameter_search(const DqnConfig& base, const ActionSet& set,
                                const ChainSpec& spec, int trials,
                                const SearchRanges& ranges,
                                int train_episodes, int val_episodes,
                                const NoiseModel& noise,
                                std::uint64_t master_seed,
                                const WorkerPool& pool,
                                std::optional<int> n_steps = std::nullopt);

}  // namespace qstc

#endif  // QSTC_HARNESS_HPP_
