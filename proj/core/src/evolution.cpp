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

#include "qstc/evolution.hpp"

#include "qstc/error.hpp"

namespace qstc {

ChainEvolver::ChainEvolver(const PropagatorCache& cache,
                           std::optional<NoiseModel> noise, RandomStream rng)
    : cache_(&cache),
      noise_(noise),
      rng_(rng),
      psi_(initial_state(cache.n())),
      scratch_(cache.n()) {
  if (noise_) noise_->validate();
}

void ChainEvolver::reset() {
  psi_ = initial_state(cache_->n());
  steps_ = 0;
}

double ChainEvolver::step(ActionId action) {
  scratch_.noalias() = (*cache_)[action] * psi_;
  psi_.swap(scratch_);
  if (noise_) apply_noise(*noise_, psi_, rng_);
  ++steps_;
  return transmission_probability(psi_);
}

Trajectory evolve_sequence(std::span<const ActionId> sequence,
                           const PropagatorCache& cache,
                           const std::optional<NoiseModel>& noise,
                           RandomStream rng, bool record_states) {
  for (ActionId a : sequence) {
    if (!cache.contains(a)) {
      throw InvalidArgument("unknown action index " + std::to_string(a));
    }
  }
  ChainEvolver evolver(cache, noise, rng);
  Trajectory traj;
  traj.probabilities.reserve(sequence.size());
  if (record_states) traj.states.reserve(sequence.size());
  for (ActionId a : sequence) {
    const double p = evolver.step(a);
    traj.probabilities.push_back(p);
    if (record_states) traj.states.push_back(evolver.state());
    if (p > traj.max_probability) {
      traj.max_probability = p;
      traj.argmax_step = evolver.steps_taken();
    }
  }
  if (!sequence.empty() && traj.argmax_step == 0) traj.argmax_step = 1;
  return traj;
}

Trajectory evolve_sequence(std::span<const ActionId> sequence,
                           const PropagatorCache& cache, bool record_states) {
  return evolve_sequence(sequence, cache, std::nullopt, RandomStream(0, 0),
                         record_states);
}

Trajectory free_evolution_baseline(const ChainSpec& spec, int n_steps,
                                   bool record_states) {
  if (n_steps < 1) throw InvalidArgument("baseline needs n_steps >= 1");
  spec.validate();
  const PropagatorCache cache = PropagatorCache::free_only(spec);
  const ControlSequence idle(n_steps, 0);
  return evolve_sequence(idle, cache, record_states);
}

}  // namespace qstc
