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

#include "qstc/dqn.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "qstc/error.hpp"
#include "qstc/evolution.hpp"

namespace qstc {
namespace {

Eigen::Index argmax_lowest(const Eigen::VectorXd& q) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < q.size(); ++i) {
    if (q(i) > q(best)) best = i;
  }
  return best;
}

// Shared by epsilon_greedy() and the training loop; the greedy branch only
// evaluates the network when it is taken.
template <typename QFn>
ActionId select_action(double eps, int n_actions, RandomStream& rng, QFn&& q) {
  if (rng.uniform() < eps) {
    return static_cast<ActionId>(rng.below(static_cast<std::uint64_t>(n_actions)));
  }
  return static_cast<ActionId>(argmax_lowest(q()));
}

struct BatchTerms {
  Eigen::MatrixXd inputs;
  Eigen::MatrixXd d_output;
  double loss = 0.0;
};

BatchTerms batch_terms(const QNetwork& net, const QNetwork& target,
                       std::span<const Experience> batch, double gamma) {
  if (batch.empty()) throw InvalidArgument("TD batch must not be empty");
  const auto b = static_cast<Eigen::Index>(batch.size());
  BatchTerms out;
  out.inputs.resize(net.input_size(), b);
  Eigen::MatrixXd next(net.input_size(), b);
  for (Eigen::Index i = 0; i < b; ++i) {
    out.inputs.col(i) = batch[i].state;
    next.col(i) = batch[i].next_state;
  }
  const Eigen::MatrixXd q = net.forward_batch(out.inputs);
  const Eigen::MatrixXd q_next = target.forward_batch(next);
  out.d_output = Eigen::MatrixXd::Zero(q.rows(), b);
  for (Eigen::Index i = 0; i < b; ++i) {
    const Experience& e = batch[i];
    if (e.action < 0 || e.action >= q.rows()) {
      throw InvalidArgument("experience action outside the network output");
    }
    double y = e.reward;
    if (!e.terminal) y += gamma * q_next.col(i).maxCoeff();
    const double err = y - q(e.action, i);
    out.loss += err * err;
    out.d_output(e.action, i) = -2.0 * err / static_cast<double>(b);
  }
  out.loss /= static_cast<double>(b);
  return out;
}

}  // namespace

Eigen::VectorXd encode_state(const StateVector& psi) {
  const auto n = psi.size();
  Eigen::VectorXd s(2 * n);
  s.head(n) = psi.real();
  s.tail(n) = psi.imag();
  return s;
}

ReplayMemory::ReplayMemory(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw InvalidArgument("replay capacity must be positive");
  items_.reserve(std::min<std::size_t>(capacity, 1 << 16));
}

void ReplayMemory::push(Experience e) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(e));
    return;
  }
  items_[head_] = std::move(e);
  head_ = (head_ + 1) % capacity_;
}

const Experience& ReplayMemory::operator[](std::size_t i) const {
  if (i >= items_.size()) throw InvalidArgument("replay index out of range");
  return items_[(head_ + i) % items_.size()];
}

std::vector<Experience> ReplayMemory::sample(std::size_t count,
                                             RandomStream& rng) const {
  if (items_.empty()) throw InvalidArgument("cannot sample an empty memory");
  std::vector<Experience> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(items_[rng.below(items_.size())]);
  }
  return out;
}

double reward(double p, const RewardTable& table) {
  if (p < table.zeta) return table.below_value;
  if (p < table.high_threshold) return table.mid_coefficient * p;
  return table.high_coefficient * p;
}

double EpsilonSchedule::at(std::int64_t learning_events) const {
  return std::max(floor, start - decay * static_cast<double>(learning_events));
}

void DqnConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw InvalidArgument("gamma must lie in (0, 1]");
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw InvalidArgument("learning_rate must be positive");
  }
  if (hidden1 < 1 || (hidden2 && *hidden2 < 1) || resolved_hidden2() < 1) {
    throw InvalidArgument("hidden layer sizes must be positive");
  }
  if (minibatch < 1 || replay_capacity < 1 || learning_period < 1 ||
      target_sync_period < 1 || episodes < 1) {
    throw InvalidArgument(
        "minibatch, replay_capacity, periods and episodes must be >= 1");
  }
  if (!(epsilon.floor >= 0.0 && epsilon.floor <= epsilon.start &&
        epsilon.start <= 1.0 && epsilon.decay >= 0.0)) {
    throw InvalidArgument("epsilon schedule needs 0 <= floor <= start <= 1");
  }
  if (!(reward.zeta <= reward.high_threshold)) {
    throw InvalidArgument("reward zeta must not exceed high_threshold");
  }
  if (!(fidelity_threshold >= 0.0 && fidelity_threshold <= 1.0)) {
    throw InvalidArgument("fidelity_threshold must lie in [0, 1]");
  }
  NoiseModel{noise_p, noise_delta}.validate();
}

int DqnConfig::resolved_hidden2() const {
  return hidden2.value_or(static_cast<int>(std::lround(hidden1 / 3.0)));
}

std::vector<int> DqnConfig::layer_sizes(int chain_length, int n_actions) const {
  return {2 * chain_length, hidden1, resolved_hidden2(), n_actions};
}

std::optional<NoiseModel> DqnConfig::training_noise() const {
  if (noise_p == 0.0 && noise_delta == 0.0) return std::nullopt;
  return NoiseModel{noise_p, noise_delta};
}

ActionId epsilon_greedy(const Eigen::VectorXd& q, double eps,
                        RandomStream& rng) {
  if (q.size() == 0) throw InvalidArgument("epsilon_greedy: empty Q vector");
  return select_action(eps, static_cast<int>(q.size()), rng,
                       [&]() -> const Eigen::VectorXd& { return q; });
}

double td_loss(const QNetwork& net, const QNetwork& target,
               std::span<const Experience> batch, double gamma) {
  return batch_terms(net, target, batch, gamma).loss;
}

TdResult td_loss_and_gradient(const QNetwork& net, const QNetwork& target,
                              std::span<const Experience> batch, double gamma) {
  BatchTerms terms = batch_terms(net, target, batch, gamma);
  return {terms.loss, net.backward(terms.inputs, terms.d_output)};
}

double td_update(QNetwork& net, const QNetwork& target,
                 std::span<const Experience> batch, double gamma,
                 double learning_rate) {
  TdResult r = td_loss_and_gradient(net, target, batch, gamma);
  if (!std::isfinite(r.loss) || !r.gradient.all_finite()) {
    throw NumericalError("non-finite TD gradient (loss = " +
                         std::to_string(r.loss) + ")");
  }
  net.descend(r.gradient, learning_rate);
  if (!net.all_finite()) {
    throw NumericalError("network weights became non-finite after update");
  }
  return r.loss;
}

TrainRecord train(const DqnConfig& config, const ActionSet& set,
                  const ChainSpec& spec, std::uint64_t seed,
                  const TrainOptions& options) {
  return train(config, PropagatorCache::build(set, spec), seed, options);
}

TrainRecord train(const DqnConfig& config, const PropagatorCache& cache,
                  std::uint64_t seed, const TrainOptions& options) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  const ChainSpec& spec = cache.spec();
  const int n_steps = options.n_steps.value_or(transfer_steps(spec.n, spec.dt));
  if (n_steps < 1) throw InvalidArgument("episodes need at least one step");
  const int n_actions = cache.size();

  RandomStream init_rng(seed, stream_tag("dqn.init"));
  RandomStream policy_rng(seed, stream_tag("dqn.policy"));
  RandomStream replay_rng(seed, stream_tag("dqn.replay"));
  RandomStream noise_rng(seed, stream_tag("dqn.noise"));

  TrainRecord record;
  record.seed = seed;
  record.n_steps = n_steps;
  record.network = QNetwork(config.layer_sizes(spec.n, n_actions), init_rng);
  record.target_network = record.network;
  QNetwork& net = record.network;
  QNetwork& target = record.target_network;

  ReplayMemory memory(static_cast<std::size_t>(config.replay_capacity));
  ChainEvolver env(cache, config.training_noise(), noise_rng);
  std::int64_t steps = 0;
  std::int64_t learning_events = 0;
  double eps = config.epsilon.at(0);
  record.best_probability = -1.0;

  ControlSequence actions;
  std::vector<double> probs;
  actions.reserve(n_steps);
  probs.reserve(n_steps);
  record.episodes.reserve(config.episodes);

  for (int episode = 1; episode <= config.episodes; ++episode) {
    env.reset();
    actions.clear();
    probs.clear();
    EpisodeStats stats;
    stats.episode = episode;
    double loss_sum = 0.0;
    Eigen::VectorXd s = encode_state(env.state());

    for (int t = 1; t <= n_steps; ++t) {
      const ActionId a = select_action(eps, n_actions, policy_rng,
                                       [&] { return net.forward(s); });
      const double p = env.step(a);
      actions.push_back(a);
      probs.push_back(p);
      stats.max_probability = std::max(stats.max_probability, p);

      Eigen::VectorXd s_next = encode_state(env.state());
      const bool early_stop =
          config.fidelity_threshold > 0.0 && p >= config.fidelity_threshold;
      const bool terminal = t == n_steps || early_stop;
      memory.push({s, a, reward(p, config.reward), s_next, terminal});
      s = std::move(s_next);
      ++steps;

      if (steps % config.learning_period == 0 &&
          memory.size() >= static_cast<std::size_t>(config.minibatch)) {
        const std::vector<Experience> batch =
            memory.sample(static_cast<std::size_t>(config.minibatch), replay_rng);
        loss_sum += td_update(net, target, batch, config.gamma,
                              config.learning_rate);
        ++learning_events;
        ++stats.learning_events;
        eps = config.epsilon.at(learning_events);
        if (learning_events % config.target_sync_period == 0) {
          target = net;
          if (options.on_target_sync) {
            options.on_target_sync(learning_events, net, target);
          }
        }
      }
      if (terminal) break;
    }

    stats.epsilon = eps;
    stats.loss_mean =
        stats.learning_events > 0 ? loss_sum / stats.learning_events : 0.0;
    if (stats.max_probability > record.best_probability) {
      record.best_probability = stats.max_probability;
      record.best_episode = episode;
      record.best_sequence = actions;
      record.best_probabilities = probs;
    }
    record.episodes.push_back(stats);
    if (options.on_episode) options.on_episode(stats);
  }

  record.learning_events = learning_events;
  record.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return record;
}

Rollout greedy_rollout(const QNetwork& net, const PropagatorCache& cache,
                       int n_steps, const std::optional<NoiseModel>& noise,
                       RandomStream rng) {
  if (n_steps < 0) throw InvalidArgument("rollout length must be >= 0");
  if (net.output_size() != cache.size() || net.input_size() != 2 * cache.n()) {
    throw InvalidArgument("network shape does not match the action set / chain");
  }
  ChainEvolver env(cache, noise, rng);
  Rollout out;
  out.actions.reserve(n_steps);
  out.trajectory.probabilities.reserve(n_steps);
  for (int t = 0; t < n_steps; ++t) {
    const auto a =
        static_cast<ActionId>(argmax_lowest(net.forward(encode_state(env.state()))));
    const double p = env.step(a);
    out.actions.push_back(a);
    out.trajectory.probabilities.push_back(p);
    if (p > out.trajectory.max_probability) {
      out.trajectory.max_probability = p;
      out.trajectory.argmax_step = t + 1;
    }
  }
  if (n_steps > 0 && out.trajectory.argmax_step == 0) {
    out.trajectory.argmax_step = 1;
  }
  return out;
}

}  // namespace qstc
