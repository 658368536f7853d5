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

#include "qstc/harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>

#include "qstc/error.hpp"
#include "qstc/evolution.hpp"

namespace qstc {
namespace {

LengthSummary summarise(int n, int n_steps, std::vector<SeedResult> seeds) {
  LengthSummary out;
  out.n = n;
  out.n_steps = n_steps;
  std::vector<double> maxima;
  maxima.reserve(seeds.size());
  for (const SeedResult& s : seeds) maxima.push_back(s.max_probability);
  out.mean = mean_of(maxima);
  out.std = population_std(maxima);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (maxima[i] > maxima[out.best_seed]) out.best_seed = i;
    ++out.halt_counts[static_cast<int>(seeds[i].halt_reason)];
  }
  out.best = maxima.empty() ? 0.0 : maxima[out.best_seed];
  out.seeds = std::move(seeds);
  return out;
}

SeedResult to_seed_result(const GaRunRecord& r) {
  SeedResult s;
  s.seed = r.seed;
  s.max_probability = r.best.fitness.value_or(0.0);
  s.halt_reason = r.halt_reason;
  s.generations_run = r.generations_run;
  s.best_sequence = r.best.genes;
  s.wall_time_seconds = r.wall_time_seconds;
  return s;
}

}  // namespace

double mean_of(std::span<const double> values) {
  if (values.empty()) return 0.0;
  // Shifted by the first value so constant samples give that value exactly.
  const double origin = values.front();
  double acc = 0.0;
  for (double v : values) acc += v - origin;
  return origin + acc / static_cast<double>(values.size());
}

double population_std(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean_of(values);
  double acc = 0.0;
  for (double v : values) acc += (v - m) * (v - m);
  return std::sqrt(acc / values.size());
}

std::uint64_t ga_run_seed(std::uint64_t master_seed, int n, int seed_index) {
  return derive_stream_id({master_seed, stream_tag("ga.seed"),
                           static_cast<std::uint64_t>(n),
                           static_cast<std::uint64_t>(seed_index)});
}

MultiSeedSummary multi_seed_ga(std::span<const int> lengths,
                               const GaConfig& config, ActionSetKind kind,
                               const ChainSpec& base, int n_seeds,
                               std::uint64_t master_seed,
                               const WorkerPool& pool) {
  config.validate();
  if (n_seeds < 1) throw InvalidArgument("n_seeds must be >= 1");
  const std::size_t per_length = static_cast<std::size_t>(n_seeds);
  std::vector<SeedResult> results(lengths.size() * per_length);

  pool.parallel_for(results.size(), [&](std::size_t job) {
    const int n = lengths[job / per_length];
    const int s = static_cast<int>(job % per_length);
    ChainSpec spec = base;
    spec.n = n;
    const ActionSet set = ActionSet::make(kind, n, spec.field_strength);
    const GaRunRecord r =
        run_ga(config, set, spec, std::nullopt, ga_run_seed(master_seed, n, s));
    results[job] = to_seed_result(r);
    const PropagatorCache cache = PropagatorCache::build(set, spec);
    results[job].argmax_step =
        evolve_sequence(r.best.genes, cache).argmax_step;
  });

  MultiSeedSummary summary;
  summary.kind = kind;
  summary.n_seeds = n_seeds;
  for (std::size_t l = 0; l < lengths.size(); ++l) {
    std::vector<SeedResult> seeds(results.begin() + l * per_length,
                                  results.begin() + (l + 1) * per_length);
    summary.lengths.push_back(summarise(
        lengths[l], transfer_steps(lengths[l], base.dt), std::move(seeds)));
  }
  return summary;
}

MultiSeedSummary scaling_study(std::span<const int> lengths,
                               const GaConfig& config, const ChainSpec& base,
                               int n_seeds, std::uint64_t master_seed,
                               const WorkerPool& pool) {
  return multi_seed_ga(lengths, config, ActionSetKind::kSiteBySite, base,
                       n_seeds, master_seed, pool);
}

SweepResult sweep_h_dt(int n, std::span<const double> h_values,
                       std::span<const double> dt_values,
                       const GaConfig& config, ActionSetKind kind,
                       double coupling, std::uint64_t master_seed,
                       const WorkerPool& pool) {
  config.validate();
  for (double h : h_values) {
    if (!(h > 0.0)) throw InvalidArgument("sweep field values must be positive");
  }
  for (double dt : dt_values) {
    if (!(dt > 0.0)) throw InvalidArgument("sweep time steps must be positive");
  }
  SweepResult out;
  out.n = n;
  out.h_values.assign(h_values.begin(), h_values.end());
  out.dt_values.assign(dt_values.begin(), dt_values.end());
  out.cells.resize(h_values.size() * dt_values.size());

  pool.parallel_for(out.cells.size(), [&](std::size_t idx) {
    const double h = h_values[idx / dt_values.size()];
    const double dt = dt_values[idx % dt_values.size()];
    const ChainSpec spec{n, coupling, dt, h};
    const ActionSet set = ActionSet::make(kind, n, h);
    const std::uint64_t seed =
        derive_stream_id({master_seed, stream_tag("sweep"),
                          std::bit_cast<std::uint64_t>(h),
                          std::bit_cast<std::uint64_t>(dt)});
    const GaRunRecord r = run_ga(config, set, spec, std::nullopt, seed);
    out.cells[idx] = {h, dt, r.n_steps, r.best.fitness.value_or(0.0),
                      r.halt_reason};
  });
  return out;
}

ValidationReport validate_controller(const Controller& controller,
                                     const PropagatorCache& cache,
                                     const NoiseGrid& grid, int runs,
                                     std::uint64_t seed,
                                     const WorkerPool& pool) {
  if (runs < 1) throw InvalidArgument("validation needs at least one run");
  for (double p : grid.p_values) NoiseModel{p, 0.0}.validate();
  for (double d : grid.delta_values) NoiseModel{0.0, d}.validate();
  if (const auto* agent = std::get_if<GreedyAgentController>(&controller)) {
    if (agent->n_steps < 1) throw InvalidArgument("agent rollout length < 1");
  }

  ValidationReport report;
  report.runs = runs;
  report.grid = grid;
  const std::size_t n_cells = grid.p_values.size() * grid.delta_values.size();
  report.cells.resize(n_cells);
  for (std::size_t c = 0; c < n_cells; ++c) {
    report.cells[c].p = grid.p_values[c / grid.delta_values.size()];
    report.cells[c].delta = grid.delta_values[c % grid.delta_values.size()];
    report.cells[c].max_probabilities.assign(runs, 0.0);
  }

  const std::uint64_t tag = stream_tag("validate");
  const auto per_cell = static_cast<std::size_t>(runs);
  pool.parallel_for(n_cells * per_cell, [&](std::size_t job) {
    const std::size_t c = job / per_cell;
    const std::size_t r = job % per_cell;
    ValidationCell& cell = report.cells[c];
    const NoiseModel noise{cell.p, cell.delta};
    RandomStream rng(seed, derive_stream_id({tag, c, r}));
    double value = 0.0;
    if (const auto* fixed = std::get_if<FixedSequenceController>(&controller)) {
      value = evolve_sequence(fixed->sequence, cache, noise, rng).max_probability;
    } else {
      const auto& agent = std::get<GreedyAgentController>(controller);
      value = greedy_rollout(agent.network, cache, agent.n_steps, noise, rng)
                  .trajectory.max_probability;
    }
    cell.max_probabilities[r] = value;
  });

  for (ValidationCell& cell : report.cells) {
    cell.mean_max_probability = mean_of(cell.max_probabilities);
    cell.std_max_probability = population_std(cell.max_probabilities);
  }
  return report;
}

double ActionHistogram::share(ActionId id) const {
  const auto total = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
  if (total == 0 || id < 0 || id >= static_cast<ActionId>(counts.size())) {
    return 0.0;
  }
  return static_cast<double>(counts[id]) / static_cast<double>(total);
}

ActionHistogram action_histogram(const ChainSpec& spec, ActionSetKind kind,
                                 int n_sequences, double threshold,
                                 const GaConfig& config, int max_runs,
                                 std::uint64_t master_seed,
                                 const WorkerPool& pool,
                                 std::optional<int> n_steps) {
  config.validate();
  spec.validate();
  if (n_sequences < 1) throw InvalidArgument("n_sequences must be >= 1");
  if (max_runs < 1) throw InvalidArgument("max_runs must be >= 1");
  const ActionSet set = ActionSet::make(kind, spec.n, spec.field_strength);

  ActionHistogram hist;
  hist.n = spec.n;
  hist.n_steps = n_steps.value_or(transfer_steps(spec.n, spec.dt));
  hist.threshold = threshold;
  hist.requested = n_sequences;
  hist.counts.assign(set.size(), 0);

  std::set<ControlSequence> seen;
  GaRunOptions options;
  options.keep_final_population = true;
  options.n_steps = hist.n_steps;
  const auto batch = static_cast<std::size_t>(pool.size());
  int next_run = 0;
  while (hist.harvested < n_sequences && next_run < max_runs) {
    const std::size_t count =
        std::min<std::size_t>(batch, static_cast<std::size_t>(max_runs - next_run));
    std::vector<GaRunRecord> records(count);
    pool.parallel_for(count, [&](std::size_t i) {
      records[i] = run_ga(config, set, spec, std::nullopt,
                          ga_run_seed(master_seed, spec.n,
                                      next_run + static_cast<int>(i)),
                          options);
    });
    // Harvest strictly in run order so the result does not depend on the
    // batch width.
    for (const GaRunRecord& r : records) {
      if (hist.harvested >= n_sequences) break;
      ++hist.runs_used;
      const std::vector<std::size_t> ranking =
          select_parents_sss(r.final_population,
                             static_cast<int>(r.final_population.size()));
      for (std::size_t idx : ranking) {
        const Chromosome& c = r.final_population[idx];
        if (*c.fitness < threshold) break;
        if (!seen.insert(c.genes).second) continue;
        for (ActionId g : c.genes) ++hist.counts[g];
        if (++hist.harvested >= n_sequences) break;
      }
    }
    next_run += static_cast<int>(count);
  }
  return hist;
}

HpoResult hyperparameter_search(const DqnConfig& base, const ActionSet& set,
                                const ChainSpec& spec, int trials,
                                const SearchRanges& ranges,
                                int train_episodes, int val_episodes,
                                const NoiseModel& noise,
                                std::uint64_t master_seed,
                                const WorkerPool& pool,
                                std::optional<int> n_steps_override) {
  if (trials < 1) throw InvalidArgument("hyperparameter search needs trials");
  if (train_episodes < 1 || val_episodes < 1) {
    throw InvalidArgument("train/validation episode counts must be >= 1");
  }
  if (!(ranges.gamma_min <= ranges.gamma_max && ranges.gamma_min > 0.0 &&
        ranges.gamma_max <= 1.0 && ranges.learning_rate_min > 0.0 &&
        ranges.learning_rate_min <= ranges.learning_rate_max &&
        ranges.hidden1_min >= 1 && ranges.hidden1_min <= ranges.hidden1_max)) {
    throw InvalidArgument("inconsistent hyperparameter search ranges");
  }
  noise.validate();
  const PropagatorCache cache = PropagatorCache::build(set, spec);
  const int n_steps =
      n_steps_override.value_or(transfer_steps(spec.n, spec.dt));
  TrainOptions train_options;
  train_options.n_steps = n_steps;

  HpoResult result;
  result.trials.resize(trials);
  pool.parallel_for(static_cast<std::size_t>(trials), [&](std::size_t i) {
    RandomStream rng(master_seed, derive_stream_id({stream_tag("hpo.sample"), i}));
    HpoTrial& trial = result.trials[i];
    trial.index = static_cast<int>(i);
    trial.gamma = rng.uniform(ranges.gamma_min, ranges.gamma_max);
    trial.learning_rate =
        std::exp(rng.uniform(std::log(ranges.learning_rate_min),
                             std::log(ranges.learning_rate_max)));
    trial.hidden1 = ranges.hidden1_min +
                    static_cast<int>(rng.below(static_cast<std::uint64_t>(
                        ranges.hidden1_max - ranges.hidden1_min + 1)));

    DqnConfig config = base;
    config.gamma = trial.gamma;
    config.learning_rate = trial.learning_rate;
    config.hidden1 = trial.hidden1;
    config.hidden2.reset();
    config.episodes = train_episodes;
    config.noise_p = noise.p;
    config.noise_delta = noise.delta;
    trial.hidden2 = config.resolved_hidden2();

    const std::uint64_t train_seed =
        derive_stream_id({master_seed, stream_tag("hpo.train"), i});
    const TrainRecord record = train(config, cache, train_seed, train_options);
    trial.train_best = record.best_probability;

    std::vector<double> scores(val_episodes);
    for (int v = 0; v < val_episodes; ++v) {
      RandomStream vrng(master_seed,
                        derive_stream_id({stream_tag("hpo.validate"), i,
                                          static_cast<std::uint64_t>(v)}));
      scores[v] = greedy_rollout(record.network, cache, n_steps, noise, vrng)
                      .trajectory.max_probability;
    }
    trial.validation_mean = mean_of(scores);
    trial.validation_std = population_std(scores);
  });

  for (int i = 1; i < trials; ++i) {
    if (result.trials[i].validation_mean >
        result.trials[result.winner].validation_mean) {
      result.winner = i;
    }
  }
  const HpoTrial& w = result.trials[result.winner];
  result.best_config = base;
  result.best_config.gamma = w.gamma;
  result.best_config.learning_rate = w.learning_rate;
  result.best_config.hidden1 = w.hidden1;
  result.best_config.hidden2.reset();
  result.best_config.noise_p = noise.p;
  result.best_config.noise_delta = noise.delta;
  return result;
}

}  // namespace qstc
