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

#include "qstc/ga.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "qstc/error.hpp"
#include "qstc/evolution.hpp"

namespace qstc {
namespace {

constexpr double kSaturationTolerance = 1e-12;

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

void GaConfig::validate() const {
  if (population_size < 2) {
    throw InvalidArgument("population_size must be at least 2");
  }
  if (max_generations < 1) throw InvalidArgument("max_generations must be >= 1");
  if (saturation < 1) throw InvalidArgument("saturation must be >= 1");
  if (parents_mating < 1 || parents_mating > population_size) {
    throw InvalidArgument("parents_mating must lie in [1, population_size]");
  }
  if (keep_elitism < 0 || keep_elitism > parents_mating ||
      keep_elitism >= population_size) {
    throw InvalidArgument(
        "keep_elitism must lie in [0, parents_mating] and be below "
        "population_size");
  }
  if (!in_unit_interval(crossover_probability) ||
      !in_unit_interval(mutation_probability)) {
    throw InvalidArgument("crossover/mutation probabilities must lie in [0, 1]");
  }
  if (mutated_genes && *mutated_genes < 0) {
    throw InvalidArgument("mutated_genes must be non-negative");
  }
  if (n_seeds < 1) throw InvalidArgument("n_seeds must be >= 1");
}

GaConfig GaConfig::scaled_to(int population) const {
  GaConfig out = *this;
  const double ratio = static_cast<double>(population) / population_size;
  out.population_size = population;
  out.parents_mating =
      std::max(2, static_cast<int>(std::lround(parents_mating * ratio)));
  out.keep_elitism =
      std::max(1, static_cast<int>(std::lround(keep_elitism * ratio)));
  out.keep_elitism = std::min(out.keep_elitism, out.parents_mating);
  return out;
}

int GaConfig::resolved_mutated_genes(int chain_length,
                                     int sequence_length) const {
  const int k = mutated_genes.value_or(chain_length);
  return std::min(k, sequence_length);
}

std::string_view to_string(HaltReason reason) {
  switch (reason) {
    case HaltReason::kTargetReached:
      return "target_reached";
    case HaltReason::kSaturation:
      return "saturation";
    case HaltReason::kMaxGenerations:
      return "max_generations";
  }
  return "unknown";
}

Population init_population(const GaConfig& config, const ActionSet& set,
                           int n_steps, RandomStream& rng) {
  if (set.size() == 0) throw InvalidArgument("empty action set");
  if (n_steps < 1) throw InvalidArgument("chromosome length must be >= 1");
  Population pop(config.population_size);
  for (Chromosome& c : pop) {
    c.genes.resize(n_steps);
    for (ActionId& g : c.genes) g = static_cast<ActionId>(rng.below(set.size()));
  }
  return pop;
}

double fitness(const Chromosome& chrom, const PropagatorCache& cache,
               const std::optional<NoiseModel>& noise, RandomStream rng) {
  return evolve_sequence(chrom.genes, cache, noise, rng).max_probability;
}

std::vector<std::size_t> select_parents_sss(const Population& pop, int k) {
  if (k < 0 || static_cast<std::size_t>(k) > pop.size()) {
    throw InvalidArgument("cannot select more parents than individuals");
  }
  std::vector<std::size_t> order(pop.size());
  std::iota(order.begin(), order.end(), 0);
  for (const Chromosome& c : pop) {
    if (!c.fitness) throw InvalidArgument("parent selection needs fitness");
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return *pop[a].fitness > *pop[b].fitness;
                   });
  order.resize(k);
  return order;
}

Chromosome uniform_crossover(const Chromosome& a, const Chromosome& b,
                             double prob, RandomStream& rng) {
  if (a.genes.size() != b.genes.size()) {
    throw InvalidArgument("crossover parents differ in length");
  }
  Chromosome child{a.genes, std::nullopt};
  if (!(rng.uniform() < prob)) return child;
  for (std::size_t i = 0; i < child.genes.size(); ++i) {
    if (rng.uniform() < 0.5) child.genes[i] = b.genes[i];
  }
  return child;
}

Chromosome swap_mutation(Chromosome chrom, double prob, int n_genes,
                         RandomStream& rng) {
  const auto length = chrom.genes.size();
  if (n_genes < 0 || static_cast<std::size_t>(n_genes) > length) {
    throw InvalidArgument("mutated gene count exceeds chromosome length");
  }
  if (!(rng.uniform() < prob)) return chrom;
  chrom.fitness.reset();
  if (length < 2) return chrom;
  for (int s = 0; s < n_genes / 2; ++s) {
    const auto i = rng.below(length);
    auto j = rng.below(length - 1);
    if (j >= i) ++j;
    std::swap(chrom.genes[i], chrom.genes[j]);
  }
  return chrom;
}

GaRunRecord run_ga(const GaConfig& config, const ActionSet& set,
                   const ChainSpec& spec,
                   const std::optional<NoiseModel>& noise, std::uint64_t seed,
                   const GaRunOptions& options) {
  config.validate();
  spec.validate();
  if (noise) noise->validate();
  const auto started = std::chrono::steady_clock::now();

  const PropagatorCache cache = PropagatorCache::build(set, spec);
  const int n_steps = options.n_steps.value_or(transfer_steps(spec.n, spec.dt));
  const int mutated = config.resolved_mutated_genes(spec.n, n_steps);

  RandomStream init_rng(seed, stream_tag("ga.init"));
  RandomStream ops_rng(seed, stream_tag("ga.operators"));
  const std::uint64_t fitness_tag = stream_tag("ga.fitness");

  GaRunRecord record;
  record.seed = seed;
  record.n_steps = n_steps;
  Population pop = init_population(config, set, n_steps, init_rng);

  auto evaluate = [&](int generation) {
    auto job = [&](std::size_t i) {
      if (pop[i].fitness) return;
      RandomStream rng(seed, derive_stream_id({fitness_tag,
                                               static_cast<std::uint64_t>(generation),
                                               i}));
      pop[i].fitness = fitness(pop[i], cache, noise, rng);
    };
    if (options.pool) {
      options.pool->parallel_for(pop.size(), job);
    } else {
      for (std::size_t i = 0; i < pop.size(); ++i) job(i);
    }
  };

  double best_ever = -1.0;
  int last_improvement = 0;
  for (int generation = 1;; ++generation) {
    evaluate(generation);
    record.generations_run = generation;

    const std::vector<std::size_t> ranking =
        select_parents_sss(pop, config.population_size);
    const Chromosome& leader = pop[ranking.front()];
    double sum = 0.0;
    for (const Chromosome& c : pop) sum += *c.fitness;
    record.best_fitness_per_generation.push_back(*leader.fitness);
    record.mean_fitness_per_generation.push_back(sum / pop.size());

    if (*leader.fitness > best_ever + kSaturationTolerance) {
      best_ever = *leader.fitness;
      record.best = leader;
      last_improvement = generation;
    }

    if (best_ever >= config.target_probability) {
      record.halt_reason = HaltReason::kTargetReached;
      break;
    }
    if (generation - last_improvement >= config.saturation) {
      record.halt_reason = HaltReason::kSaturation;
      break;
    }
    if (generation >= config.max_generations) {
      record.halt_reason = HaltReason::kMaxGenerations;
      break;
    }

    const auto parent_count = static_cast<std::uint64_t>(config.parents_mating);
    Population next;
    next.reserve(pop.size());
    for (int e = 0; e < config.keep_elitism; ++e) next.push_back(pop[ranking[e]]);
    while (next.size() < pop.size()) {
      const auto i = ops_rng.below(parent_count);
      std::uint64_t j = i;
      if (parent_count > 1) {
        j = ops_rng.below(parent_count - 1);
        if (j >= i) ++j;
      }
      Chromosome child =
          uniform_crossover(pop[ranking[i]], pop[ranking[j]],
                            config.crossover_probability, ops_rng);
      Chromosome mutant =
          swap_mutation(child, config.mutation_probability, mutated, ops_rng);
      if (options.on_offspring) options.on_offspring(child, mutant);
      mutant.fitness.reset();
      next.push_back(std::move(mutant));
    }
    pop = std::move(next);
  }

  if (options.keep_final_population) record.final_population = pop;
  record.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return record;
}

}  // namespace qstc
