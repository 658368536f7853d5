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

#ifndef QSTC_QNETWORK_HPP_
#define QSTC_QNETWORK_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "qstc/random.hpp"

namespace qstc {

// Fully connected network: ReLU on every hidden layer, linear output head.
// layer_sizes = {inputs, hidden..., outputs}; {inputs, outputs} is a plain
// affine map.
class QNetwork {
 public:
  struct Gradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;

    // Same ordering as QNetwork::parameters().
    std::vector<double> flatten() const;
    bool all_finite() const;
  };

  QNetwork() = default;

  // Weights and biases uniform on +-1/sqrt(fan_in).
  QNetwork(std::vector<int> layer_sizes, RandomStream& rng);

  static QNetwork from_parameters(std::vector<int> layer_sizes,
                                  std::span<const double> parameters);

  const std::vector<int>& layer_sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }

  Eigen::VectorXd forward(const Eigen::VectorXd& input) const;
  // One sample per column.
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& inputs) const;

  // Gradient of sum_ij d_output(i, j) * out(i, j) with respect to every
  // parameter, where out = forward_batch(inputs).
  Gradients backward(const Eigen::MatrixXd& inputs,
                     const Eigen::MatrixXd& d_output) const;

  // theta <- theta - learning_rate * grad
  void descend(const Gradients& grad, double learning_rate);

  // Flat layout: for each layer, the weight matrix row-major (out x in)
  // followed by its bias.
  std::size_t parameter_count() const;
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> parameters);

  bool all_finite() const;

  // {"layer_sizes": [...], "parameters": [...]}
  nlohmann::json to_json() const;
  static QNetwork from_json(const nlohmann::json& j);

 private:
  struct Layer {
    Eigen::MatrixXd w;
    Eigen::VectorXd b;
  };

  void allocate(std::vector<int> layer_sizes);

  std::vector<int> sizes_;
  std::vector<Layer> layers_;
};

}  // namespace qstc

#endif  // QSTC_QNETWORK_HPP_
