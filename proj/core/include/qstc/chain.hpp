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

#ifndef QSTC_CHAIN_HPP_
#define QSTC_CHAIN_HPP_

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace qstc {

using Complex = std::complex<double>;

// Amplitudes of the single excitation; component k is the amplitude of the
// excitation sitting on site k (0-based internally, site k+1 in 1-based
// chain notation).
using StateVector = Eigen::VectorXcd;
using Hamiltonian = Eigen::MatrixXcd;
using StepUnitary = Eigen::MatrixXcd;

// Homogeneous XX chain with piecewise-constant local fields.
struct ChainSpec {
  int n = 2;                     // number of qubits
  double coupling = 1.0;         // J
  double dt = 0.15;              // length of one control bin
  double field_strength = 100.0; // h

  // Throws InvalidArgument unless n >= 2, dt > 0 and coupling != 0.
  void validate() const;
};

// Number of control bins covering [0, 3N/4], i.e. ceil(0.75 N / dt). A
// relative slack of 1e-9 absorbs rounding so that N=32, dt=0.15 gives 160.
int transfer_steps(int n, double dt);

// One-excitation block of the XX Hamiltonian plus local z fields:
// H[k][k+1] = H[k+1][k] = -2J and H[k][k] = 2 fields[k]. The constant
// -sum(fields) is dropped; it only contributes a global phase.
Hamiltonian build_step_hamiltonian(const ChainSpec& spec,
                                   std::span<const double> fields);

// exp(+i H tau) through the Hermitian eigendecomposition of H.
// Throws InvalidArgument if H is not Hermitian within 1e-12.
StepUnitary step_propagator(const Hamiltonian& h, double tau);

// max_ij |(U^dagger U - I)_ij|
double unitarity_defect(const Eigen::MatrixXcd& u);

// Excitation on the first site.
StateVector initial_state(int n);

// |<N|psi>|^2 for a state evolved from |1>.
double transmission_probability(const StateVector& state);

// Fidelity averaged over all one-qubit input states, with cos(gamma) = 1:
// p/6 + sqrt(p)/3 + 1/2. Throws InvalidArgument outside [0, 1].
double averaged_fidelity(double p);

// Record of one forced evolution.
struct Trajectory {
  // probabilities[k] is P after k+1 control bins.
  std::vector<double> probabilities;
  double max_probability = 0.0;
  // 1-based bin count of the first maximum; 0 for an empty trajectory.
  int argmax_step = 0;
  // Filled only when recording was requested; states[k] pairs with
  // probabilities[k].
  std::vector<StateVector> states;

  double peak_time(double dt) const { return argmax_step * dt; }
};

}  // namespace qstc

#endif  // QSTC_CHAIN_HPP_
