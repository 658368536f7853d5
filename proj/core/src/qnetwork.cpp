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

#include "qstc/qnetwork.hpp"

#include <cmath>

#include "qstc/error.hpp"

namespace qstc {

std::vector<double> QNetwork::Gradients::flatten() const {
  std::vector<double> flat;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (Eigen::Index r = 0; r < weights[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < weights[l].cols(); ++c) {
        flat.push_back(weights[l](r, c));
      }
    }
    for (Eigen::Index r = 0; r < biases[l].size(); ++r) {
      flat.push_back(biases[l](r));
    }
  }
  return flat;
}

bool QNetwork::Gradients::all_finite() const {
  for (const auto& w : weights) {
    if (!w.allFinite()) return false;
  }
  for (const auto& b : biases) {
    if (!b.allFinite()) return false;
  }
  return true;
}

void QNetwork::allocate(std::vector<int> layer_sizes) {
  if (layer_sizes.size() < 2) {
    throw InvalidArgument("network needs at least input and output sizes");
  }
  for (int s : layer_sizes) {
    if (s < 1) throw InvalidArgument("layer sizes must be positive");
  }
  sizes_ = std::move(layer_sizes);
  layers_.clear();
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    layers_.push_back({Eigen::MatrixXd::Zero(sizes_[l + 1], sizes_[l]),
                       Eigen::VectorXd::Zero(sizes_[l + 1])});
  }
}

QNetwork::QNetwork(std::vector<int> layer_sizes, RandomStream& rng) {
  allocate(std::move(layer_sizes));
  for (Layer& layer : layers_) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.w.cols()));
    for (Eigen::Index r = 0; r < layer.w.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.w.cols(); ++c) {
        layer.w(r, c) = rng.uniform(-bound, bound);
      }
    }
    for (Eigen::Index r = 0; r < layer.b.size(); ++r) {
      layer.b(r) = rng.uniform(-bound, bound);
    }
  }
}

QNetwork QNetwork::from_parameters(std::vector<int> layer_sizes,
                                   std::span<const double> parameters) {
  QNetwork net;
  net.allocate(std::move(layer_sizes));
  net.set_parameters(parameters);
  return net;
}

Eigen::VectorXd QNetwork::forward(const Eigen::VectorXd& input) const {
  if (input.size() != input_size()) {
    throw InvalidArgument("network input has the wrong length");
  }
  Eigen::VectorXd a = input;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Eigen::VectorXd z = layers_[l].w * a + layers_[l].b;
    if (l + 1 < layers_.size()) z = z.cwiseMax(0.0);
    a = std::move(z);
  }
  return a;
}

Eigen::MatrixXd QNetwork::forward_batch(const Eigen::MatrixXd& inputs) const {
  if (inputs.rows() != input_size()) {
    throw InvalidArgument("network input has the wrong length");
  }
  Eigen::MatrixXd a = inputs;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Eigen::MatrixXd z = layers_[l].w * a;
    z.colwise() += layers_[l].b;
    if (l + 1 < layers_.size()) z = z.cwiseMax(0.0);
    a = std::move(z);
  }
  return a;
}

QNetwork::Gradients QNetwork::backward(const Eigen::MatrixXd& inputs,
                                       const Eigen::MatrixXd& d_output) const {
  const std::size_t depth = layers_.size();
  // activations[l] is the input of layer l; activations[depth] the output.
  std::vector<Eigen::MatrixXd> activations;
  activations.reserve(depth + 1);
  activations.push_back(inputs);
  for (std::size_t l = 0; l < depth; ++l) {
    Eigen::MatrixXd z = layers_[l].w * activations.back();
    z.colwise() += layers_[l].b;
    if (l + 1 < depth) z = z.cwiseMax(0.0);
    activations.push_back(std::move(z));
  }
  if (d_output.rows() != output_size() || d_output.cols() != inputs.cols()) {
    throw InvalidArgument("output gradient has the wrong shape");
  }

  Gradients grad;
  grad.weights.resize(depth);
  grad.biases.resize(depth);
  Eigen::MatrixXd delta = d_output;
  for (std::size_t l = depth; l-- > 0;) {
    if (l + 1 < depth) {
      // ReLU derivative taken from the post-activation value.
      delta = delta.cwiseProduct(
          (activations[l + 1].array() > 0.0).cast<double>().matrix());
    }
    grad.weights[l].noalias() = delta * activations[l].transpose();
    grad.biases[l] = delta.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd upstream = layers_[l].w.transpose() * delta;
      delta = std::move(upstream);
    }
  }
  return grad;
}

void QNetwork::descend(const Gradients& grad, double learning_rate) {
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    layers_[l].w -= learning_rate * grad.weights[l];
    layers_[l].b -= learning_rate * grad.biases[l];
  }
}

std::size_t QNetwork::parameter_count() const {
  std::size_t count = 0;
  for (const Layer& layer : layers_) count += layer.w.size() + layer.b.size();
  return count;
}

std::vector<double> QNetwork::parameters() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (const Layer& layer : layers_) {
    for (Eigen::Index r = 0; r < layer.w.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.w.cols(); ++c) {
        flat.push_back(layer.w(r, c));
      }
    }
    for (Eigen::Index r = 0; r < layer.b.size(); ++r) flat.push_back(layer.b(r));
  }
  return flat;
}

void QNetwork::set_parameters(std::span<const double> parameters) {
  if (parameters.size() != parameter_count()) {
    throw InvalidArgument("parameter vector has the wrong length");
  }
  std::size_t k = 0;
  for (Layer& layer : layers_) {
    for (Eigen::Index r = 0; r < layer.w.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.w.cols(); ++c) {
        layer.w(r, c) = parameters[k++];
      }
    }
    for (Eigen::Index r = 0; r < layer.b.size(); ++r) layer.b(r) = parameters[k++];
  }
}

bool QNetwork::all_finite() const {
  for (const Layer& layer : layers_) {
    if (!layer.w.allFinite() || !layer.b.allFinite()) return false;
  }
  return true;
}

nlohmann::json QNetwork::to_json() const {
  return {{"layer_sizes", sizes_}, {"parameters", parameters()}};
}

QNetwork QNetwork::from_json(const nlohmann::json& j) {
  auto sizes = j.at("layer_sizes").get<std::vector<int>>();
  auto params = j.at("parameters").get<std::vector<double>>();
  return from_parameters(std::move(sizes), params);
}

}  // namespace qstc
