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

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qstc/chain.hpp"
#include "qstc/error.hpp"
#include "qstc/evolution.hpp"
#include "qstc/random.hpp"

namespace qstc {
namespace {

std::vector<double> random_fields(int n, RandomStream& rng) {
  std::vector<double> f(n);
  for (double& x : f) x = rng.uniform(-5.0, 5.0);
  return f;
}

TEST(TransferSteps, MatchesCeiling) {
  EXPECT_EQ(transfer_steps(32, 0.15), 160);
  EXPECT_EQ(transfer_steps(8, 0.15), 40);
  EXPECT_EQ(transfer_steps(4, 0.15), 20);
  EXPECT_EQ(transfer_steps(3, 0.3), 8);   // 7.5 -> 8
  EXPECT_EQ(transfer_steps(10, 0.7), 11); // 10.71 -> 11
  EXPECT_EQ(transfer_steps(7, 0.35), 15);  // quotient is 15 + 2e-15 in doubles
  for (int n = 2; n <= 128; ++n) EXPECT_EQ(transfer_steps(n, 0.15), 5 * n);
  EXPECT_THROW(transfer_steps(0, 0.15), InvalidArgument);
  EXPECT_THROW(transfer_steps(4, 0.0), InvalidArgument);
}

TEST(Hamiltonian, MatchesManyBodyProjection) {
  RandomStream rng(11, 0);
  for (int n = 2; n <= 7; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const std::vector<double> fields = random_fields(n, rng);
      const double coupling = rng.uniform(0.2, 2.0);
      ChainSpec spec{n, coupling, 0.15, 1.0};
      const Hamiltonian h = build_step_hamiltonian(spec, fields);
      Eigen::MatrixXcd block = testing::one_excitation_block(
          testing::many_body_xx(n, coupling, fields), n);
      // The projection differs by the constant -sum(h).
      double total = 0.0;
      for (double f : fields) total += f;
      block += total * Eigen::MatrixXcd::Identity(n, n);
      EXPECT_LT((block - h).cwiseAbs().maxCoeff(), 1e-12) << "n=" << n;
    }
  }
}

TEST(Hamiltonian, RejectsBadInput) {
  ChainSpec spec{4, 1.0, 0.15, 100.0};
  std::vector<double> three(3, 0.0);
  EXPECT_THROW(build_step_hamiltonian(spec, three), InvalidArgument);
  spec.n = 1;
  std::vector<double> one(1, 0.0);
  EXPECT_THROW(build_step_hamiltonian(spec, one), InvalidArgument);
}

TEST(Propagator, MatchesTaylorOracle) {
  RandomStream rng(7, 1);
  for (int n = 2; n <= 8; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      ChainSpec spec{n, 1.0, 0.15, 100.0};
      const Hamiltonian h = build_step_hamiltonian(spec, random_fields(n, rng));
      const double tau = rng.uniform(0.01, 2.0);
      const StepUnitary u = step_propagator(h, tau);
      EXPECT_LT((u - testing::taylor_expi(h, tau)).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LT(unitarity_defect(u), 1e-12);
    }
  }
}

TEST(Propagator, DiagonalFieldIsPhaseGate) {
  // With J -> 0 the step is exp(2 i h tau) on the field site.
  Hamiltonian h = Hamiltonian::Zero(3, 3);
  h(1, 1) = 2.0 * 100.0;
  const StepUnitary u = step_propagator(h, 0.15);
  EXPECT_NEAR(std::abs(u(1, 1) - std::polar(1.0, 30.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(u(0, 0) - 1.0), 0.0, 1e-12);
}

TEST(Propagator, RejectsNonHermitian) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(step_propagator(m, 0.1), InvalidArgument);
  EXPECT_THROW(step_propagator(Eigen::MatrixXcd::Zero(2, 3), 0.1),
               InvalidArgument);
}

TEST(Propagator, GlobalShiftChangesOnlyAPhase) {
  RandomStream rng(5, 2);
  ChainSpec spec{6, 1.0, 0.15, 100.0};
  const Hamiltonian h = build_step_hamiltonian(spec, random_fields(6, rng));
  const double shift = 3.7;
  const StepUnitary a = step_propagator(h, 0.15);
  const StepUnitary b = step_propagator(
      h + shift * Eigen::MatrixXcd::Identity(6, 6), 0.15);
  const StateVector pa = a * initial_state(6);
  const StateVector pb = b * initial_state(6);
  for (int k = 0; k < 6; ++k) {
    EXPECT_NEAR(std::norm(pa(k)), std::norm(pb(k)), 1e-12);
  }
}

TEST(FreeEvolution, TwoSitesFollowSineSquared) {
  ChainSpec spec{2, 1.0, 0.01, 0.0};
  const Trajectory t = free_evolution_baseline(spec, 200);
  for (std::size_t k = 0; k < t.probabilities.size(); ++k) {
    const double time = (k + 1) * spec.dt;
    EXPECT_NEAR(t.probabilities[k], std::pow(std::sin(2.0 * time), 2), 1e-12);
  }
  // pi/4 = 0.785..., nearest bin is 79 (t = 0.79).
  EXPECT_EQ(t.argmax_step, 79);
}

TEST(FreeEvolution, ThreeSitesReachOneAtPeak) {
  // Eigenvalues 0, +-2 sqrt(2); P(t) = sin^4(sqrt(2) t).
  const double peak = std::numbers::pi / (2.0 * std::sqrt(2.0));
  ChainSpec spec{3, 1.0, peak, 0.0};
  const Trajectory t = free_evolution_baseline(spec, 1);
  EXPECT_NEAR(t.probabilities[0], 1.0, 1e-12);
}

TEST(FreeEvolution, NormIsConserved) {
  ChainSpec spec{16, 1.0, 0.15, 100.0};
  const Trajectory t = free_evolution_baseline(spec, 80, true);
  ASSERT_EQ(t.states.size(), 80u);
  for (const StateVector& s : t.states) EXPECT_NEAR(s.squaredNorm(), 1.0, 1e-12);
}

TEST(Fidelity, KnownValues) {
  EXPECT_EQ(averaged_fidelity(1.0), 1.0);
  EXPECT_EQ(averaged_fidelity(0.0), 0.5);
  EXPECT_NEAR(averaged_fidelity(0.99), 0.996663, 1e-6);
  EXPECT_THROW(averaged_fidelity(1.5), InvalidArgument);
  EXPECT_THROW(averaged_fidelity(-0.1), InvalidArgument);
}

TEST(Fidelity, Monotone) {
  double prev = averaged_fidelity(0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double f = averaged_fidelity(i / 1000.0);
    EXPECT_GT(f, prev);
    prev = f;
  }
}

TEST(ChainSpec, Validation) {
  EXPECT_NO_THROW((ChainSpec{2, 1.0, 0.15, 100.0}.validate()));
  EXPECT_THROW((ChainSpec{1, 1.0, 0.15, 100.0}.validate()), InvalidArgument);
  EXPECT_THROW((ChainSpec{4, 0.0, 0.15, 100.0}.validate()), InvalidArgument);
  EXPECT_THROW((ChainSpec{4, 1.0, -0.1, 100.0}.validate()), InvalidArgument);
}

}  // namespace
}  // namespace qstc
