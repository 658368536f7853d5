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

#ifndef QSTC_GA_HPP_
#define QSTC_GA_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "qstc/actions.hpp"
#include "qstc/chain.hpp"
#include "qstc/noise.hpp"
#include "qstc/parallel.hpp"
#include "qstc/random.hpp"

namespace qstc {

// Hyperparameters of the steady-state GA. Defaults are the published table.
struct GaConfig {
  int population_size = 4096;
  int max_generations = 1000;
  int saturation = 30;
  int parents_mating = 409;
  int keep_elitism = 409;
  double crossover_probability = 0.8;
  double mutation_probability = 0.99;
  // Gene positions taking part in one mutation event (floor(k/2) swaps).
  // Unset means the chain length N.
  std::optional<int> mutated_genes;
  double target_probability = 0.99;
  int n_seeds = 30;

  // Throws InvalidArgument unless
  // 1 <= parents_mating <= population_size, 0 <= keep_elitism <=
  // parents_mating, keep_elitism < population_size, probabilities in [0,1].
  void validate() const;

  // Same settings with population_size replaced and parents_mating /
  // keep_elitism rescaled in proportion (409/4096 of 512 is 51).
  GaConfig scaled_to(int population) const;

  int resolved_mutated_genes(int chain_length, int sequence_length) const;
};

struct Chromosome {
  ControlSequence genes;
  std::optional<double> fitness;
};

using Population = std::vector<Chromosome>;

enum class HaltReason { kTargetReached, kSaturation, kMaxGenerations };

std::string_view to_string(HaltReason reason);

struct GaRunRecord {
  std::uint64_t seed = 0;
  int n_steps = 0;
  Chromosome best;
  // Best and mean fitness of the population evaluated at each generation;
  // generation 1 is the random initial population.
  std::vector<double> best_fitness_per_generation;
  std::vector<double> mean_fitness_per_generation;
  HaltReason halt_reason = HaltReason::kMaxGenerations;
  int generations_run = 0;
  double wall_time_seconds = 0.0;
  // Filled when GaRunOptions::keep_final_population is set.
  Population final_population;
};

// Genes drawn i.i.d. uniform over the action ids.
Population init_population(const GaConfig& config, const ActionSet& set,
                           int n_steps, RandomStream& rng);

// Maximum of P along the forced trajectory.
double fitness(const Chromosome& chrom, const PropagatorCache& cache,
               const std::optional<NoiseModel>& noise, RandomStream rng);

// Indices of the k fittest chromosomes, best first; ties go to the lower
// population index. Every chromosome must carry a fitness.
std::vector<std::size_t> select_parents_sss(const Population& pop, int k);

// With probability `prob` each gene comes from a or b with equal odds;
// otherwise the child is a copy of a.
Chromosome uniform_crossover(const Chromosome& a, const Chromosome& b,
                             double prob, RandomStream& rng);

// With probability `prob`, performs floor(n_genes/2) swaps of distinct
// uniformly chosen positions. The gene multiset never changes.
Chromosome swap_mutation(Chromosome chrom, double prob, int n_genes,
                         RandomStream& rng);

struct GaRunOptions {
  // Overrides transfer_steps(N, dt) as the chromosome length.
  std::optional<int> n_steps;
  // Fitness evaluation fans out over this pool when set.
  const WorkerPool* pool = nullptr;
  bool keep_final_population = false;
  // Called for every offspring with the crossover child and its mutated form.
  std::function<void(const Chromosome&, const Chromosome&)> on_offspring;
};

// Generation loop: evaluate, stop on target / saturation / generation cap,
// select parents_mating parents, keep the keep_elitism best unchanged and fill
// the rest of the population with crossover + swap-mutation offspring of two
// distinct parents drawn uniformly from the pool.
//
// Results depend only on (config, set, spec, noise, seed): every individual
// is evaluated with its own stream, so serial and pooled runs agree bit for
// bit.
GaRunRecord run_ga(const GaConfig& config, const ActionSet& set,
                   const ChainSpec& spec,
                   const std::optional<NoiseModel>& noise, std::uint64_t seed,
                   const GaRunOptions& options = {});

}  // namespace qstc

#endif  // QSTC_GA_HPP_
