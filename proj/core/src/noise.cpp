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

#include "qstc/noise.hpp"

#include <cmath>

#include "qstc/error.hpp"

namespace qstc {

void NoiseModel::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument("noise probability must lie in [0, 1]");
  }
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw InvalidArgument("noise amplitude must be finite and >= 0");
  }
}

void NoiseGate::apply(StateVector& psi) const {
  if (active) psi.array() *= phases.array();
}

NoiseGate sample_noise_gate(const NoiseModel& model, int n, RandomStream& rng) {
  NoiseGate gate;
  gate.phases = Eigen::VectorXcd::Ones(n);
  if (rng.uniform() < model.p) {
    gate.active = true;
    for (int k = 0; k < n; ++k) {
      gate.phases(k) = std::polar(1.0, model.delta * rng.uniform(-1.0, 1.0));
    }
  }
  return gate;
}

bool apply_noise(const NoiseModel& model, StateVector& psi, RandomStream& rng) {
  if (!(rng.uniform() < model.p)) return false;
  for (Eigen::Index k = 0; k < psi.size(); ++k) {
    psi(k) *= std::polar(1.0, model.delta * rng.uniform(-1.0, 1.0));
  }
  return true;
}

}  // namespace qstc
