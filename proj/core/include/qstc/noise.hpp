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

#ifndef QSTC_NOISE_HPP_
#define QSTC_NOISE_HPP_

#include "qstc/chain.hpp"
#include "qstc/random.hpp"

namespace qstc {

// Global random-phase noise. At every control bin the gate fires with
// probability p; when it fires, every amplitude k picks up exp(i delta xi_k)
// with xi_k uniform on [-1, 1).
struct NoiseModel {
  double p = 0.0;
  double delta = 0.0;

  // Throws InvalidArgument unless p in [0, 1] and delta >= 0.
  void validate() const;
};

struct NoiseGate {
  bool active = false;
  Eigen::VectorXcd phases;  // all ones when inactive

  void apply(StateVector& psi) const;
};

// Draw discipline, shared with apply_noise(): one uniform draw for the
// activation test on every call, then n draws for the phases only when the
// gate fires. Changing p therefore never shifts the alignment of later
// activation draws.
NoiseGate sample_noise_gate(const NoiseModel& model, int n, RandomStream& rng);

// Samples a gate and applies it to psi in place, without allocating.
// Returns whether the gate fired.
bool apply_noise(const NoiseModel& model, StateVector& psi, RandomStream& rng);

}  // namespace qstc

#endif  // QSTC_NOISE_HPP_
