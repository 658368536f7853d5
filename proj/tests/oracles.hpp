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

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the eigendecomposition path of the library.

#ifndef QSTC_TESTS_ORACLES_HPP_
#define QSTC_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace qstc::testing {

// exp(i * tau * h) by scaling and squaring around a truncated Taylor series.
inline Eigen::MatrixXcd taylor_expi(const Eigen::MatrixXcd& h, double tau,
                                    int terms = 30) {
  const Eigen::Index n = h.rows();
  Eigen::MatrixXcd a = std::complex<double>(0.0, tau) * h;
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  a /= std::ldexp(1.0, squarings);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd sum = term;
  for (int k = 1; k <= terms; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

// Full 2^n matrix of  -J sum (X_i X_{i+1} + Y_i Y_{i+1}) + sum h_i Z_i,
// with bit i of the basis index set meaning "site i+1 excited" (Z = +1).
inline Eigen::MatrixXcd many_body_xx(int n, double coupling,
                                     const std::vector<double>& fields) {
  const std::size_t dim = std::size_t{1} << n;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t s = 0; s < dim; ++s) {
    for (int i = 0; i < n; ++i) {
      h(s, s) += fields[i] * (((s >> i) & 1) ? 1.0 : -1.0);
    }
    for (int i = 0; i + 1 < n; ++i) {
      const bool a = (s >> i) & 1;
      const bool b = (s >> (i + 1)) & 1;
      // XX + YY only flips antiparallel pairs, with amplitude 2.
      if (a != b) {
        const std::size_t t = s ^ (std::size_t{1} << i) ^ (std::size_t{1} << (i + 1));
        h(t, s) += -coupling * 2.0;
      }
    }
  }
  return h;
}

// One-excitation block of many_body_xx, basis |k> = only site k excited.
inline Eigen::MatrixXcd one_excitation_block(const Eigen::MatrixXcd& full,
                                             int n) {
  Eigen::MatrixXcd out(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      out(a, b) = full(std::size_t{1} << a, std::size_t{1} << b);
    }
  }
  return out;
}

// Evolves |1> step by step with explicitly supplied unitaries.
inline std::vector<double> reference_probabilities(
    const std::vector<Eigen::MatrixXcd>& steps) {
  const Eigen::Index n = steps.front().rows();
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n);
  psi(0) = 1.0;
  std::vector<double> out;
  for (const auto& u : steps) {
    psi = u * psi;
    out.push_back(std::norm(psi(n - 1)));
  }
  return out;
}

// Smallest-index first maximum.
inline double max_of(const std::vector<double>& v) {
  double m = -1.0;
  for (double x : v) m = x > m ? x : m;
  return m;
}

// Kolmogorov-Smirnov statistic of a sample against U[lo, hi).
inline double ks_uniform(std::vector<double> sample, double lo, double hi) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = (sample[i] - lo) / (hi - lo);
    d = std::max(d, std::max((i + 1) / n - f, f - i / n));
  }
  return d;
}

}  // namespace qstc::testing

#endif  // QSTC_TESTS_ORACLES_HPP_
