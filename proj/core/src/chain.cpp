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

#include "qstc/chain.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "qstc/error.hpp"

namespace qstc {

void ChainSpec::validate() const {
  if (n < 2) throw InvalidArgument("chain length must be at least 2");
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw InvalidArgument("time step must be positive");
  }
  if (coupling == 0.0 || !std::isfinite(coupling)) {
    throw InvalidArgument("coupling must be finite and non-zero");
  }
  if (!std::isfinite(field_strength)) {
    throw InvalidArgument("field strength must be finite");
  }
}

int transfer_steps(int n, double dt) {
  if (n < 1 || !(dt > 0.0)) {
    throw InvalidArgument("transfer_steps: need n >= 1 and dt > 0");
  }
  const double raw = 0.75 * n / dt;
  return static_cast<int>(std::ceil(raw * (1.0 - 1e-9)));
}

Hamiltonian build_step_hamiltonian(const ChainSpec& spec,
                                   std::span<const double> fields) {
  spec.validate();
  if (static_cast<int>(fields.size()) != spec.n) {
    throw InvalidArgument("field vector length does not match chain length");
  }
  Hamiltonian h = Hamiltonian::Zero(spec.n, spec.n);
  for (int k = 0; k + 1 < spec.n; ++k) {
    h(k, k + 1) = -2.0 * spec.coupling;
    h(k + 1, k) = -2.0 * spec.coupling;
  }
  for (int k = 0; k < spec.n; ++k) h(k, k) = 2.0 * fields[k];
  return h;
}

StepUnitary step_propagator(const Hamiltonian& h, double tau) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw InvalidArgument("step_propagator: matrix must be square");
  }
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidArgument("step_propagator: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw InvalidArgument("step_propagator: eigendecomposition failed");
  }
  const Eigen::MatrixXcd& v = solver.eigenvectors();
  Eigen::VectorXcd phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) {
    phases(k) = std::polar(1.0, solver.eigenvalues()(k) * tau);
  }
  return v * phases.asDiagonal() * v.adjoint();
}

double unitarity_defect(const Eigen::MatrixXcd& u) {
  const auto n = u.rows();
  return (u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n))
      .cwiseAbs()
      .maxCoeff();
}

StateVector initial_state(int n) {
  if (n < 1) throw InvalidArgument("initial_state: n must be positive");
  StateVector psi = StateVector::Zero(n);
  psi(0) = 1.0;
  return psi;
}

double transmission_probability(const StateVector& state) {
  if (state.size() == 0) return 0.0;
  return std::norm(state(state.size() - 1));
}

double averaged_fidelity(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument("averaged_fidelity: probability outside [0, 1]");
  }
  return p / 6.0 + std::sqrt(p) / 3.0 + 0.5;
}

}  // namespace qstc
