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

#ifndef QSTC_EVOLUTION_HPP_
#define QSTC_EVOLUTION_HPP_

#include <optional>
#include <span>

#include "qstc/actions.hpp"
#include "qstc/chain.hpp"
#include "qstc/noise.hpp"
#include "qstc/random.hpp"

namespace qstc {

// Step-at-a-time forced evolution starting from |1>. Each step applies the
// cached unitary of the chosen action and then, when a noise model is set,
// one sampled noise gate. The DQN environment and evolve_sequence() both run
// on this class.
class ChainEvolver {
 public:
  ChainEvolver(const PropagatorCache& cache, std::optional<NoiseModel> noise,
               RandomStream rng);

  void reset();
  // Returns P after the step. Throws InvalidArgument on an unknown action.
  double step(ActionId action);

  const StateVector& state() const { return psi_; }
  int steps_taken() const { return steps_; }

 private:
  const PropagatorCache* cache_;
  std::optional<NoiseModel> noise_;
  RandomStream rng_;
  StateVector psi_;
  StateVector scratch_;
  int steps_ = 0;
};

// Runs the whole sequence and records P after every step.
Trajectory evolve_sequence(std::span<const ActionId> sequence,
                           const PropagatorCache& cache,
                           const std::optional<NoiseModel>& noise,
                           RandomStream rng, bool record_states = false);

// Noiseless overload; no random draws are needed.
Trajectory evolve_sequence(std::span<const ActionId> sequence,
                           const PropagatorCache& cache,
                           bool record_states = false);

// Unforced evolution: n_steps bins with all fields off.
Trajectory free_evolution_baseline(const ChainSpec& spec, int n_steps,
                                   bool record_states = false);

}  // namespace qstc

#endif  // QSTC_EVOLUTION_HPP_
