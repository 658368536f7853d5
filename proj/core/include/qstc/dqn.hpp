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

#ifndef QSTC_DQN_HPP_
#define QSTC_DQN_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "qstc/actions.hpp"
#include "qstc/chain.hpp"
#include "qstc/noise.hpp"
#include "qstc/qnetwork.hpp"
#include "qstc/random.hpp"

namespace qstc {

// (Re psi_1, ..., Re psi_N, Im psi_1, ..., Im psi_N)
Eigen::VectorXd encode_state(const StateVector& psi);

struct Experience {
  Eigen::VectorXd state;
  ActionId action = 0;
  double reward = 0.0;
  Eigen::VectorXd next_state;
  bool terminal = false;
};

// Fixed-capacity ring buffer; the oldest experience is overwritten first.
class ReplayMemory {
 public:
  explicit ReplayMemory(std::size_t capacity);

  void push(Experience e);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  // i = 0 is the oldest stored experience.
  const Experience& operator[](std::size_t i) const;
  // `count` experiences drawn uniformly with replacement.
  std::vector<Experience> sample(std::size_t count, RandomStream& rng) const;

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;  // next slot to overwrite once full
  std::vector<Experience> items_;
};

// Stepwise reward on the transmission probability after a step:
//   p <  zeta                     -> below_value
//   zeta <= p < high_threshold    -> mid_coefficient * p
//   p >= high_threshold           -> high_coefficient * p
struct RewardTable {
  double zeta = 0.05;
  double below_value = 0.0;
  double mid_coefficient = 10.0;
  double high_threshold = 0.9;
  double high_coefficient = 2500.0;
};

double reward(double p, const RewardTable& table);

// epsilon(m) = max(floor, start - decay * m) after m learning events.
struct EpsilonSchedule {
  double start = 1.0;
  double floor = 0.01;
  double decay = 1e-4;

  double at(std::int64_t learning_events) const;
};

struct DqnConfig {
  double gamma = 0.95;
  double learning_rate = 0.01;
  int hidden1 = 120;
  // Unset means round(hidden1 / 3), which also gives 40 for hidden1 = 120.
  std::optional<int> hidden2;
  int minibatch = 32;
  int replay_capacity = 40000;
  int learning_period = 5;      // environment steps between learning events
  int target_sync_period = 200; // learning events between target copies
  int episodes = 50000;
  EpsilonSchedule epsilon;
  RewardTable reward;
  // An episode ends early once P >= fidelity_threshold; 0 disables this.
  double fidelity_threshold = 0.0;
  double noise_p = 0.0;
  double noise_delta = 0.0;

  void validate() const;
  int resolved_hidden2() const;
  std::vector<int> layer_sizes(int chain_length, int n_actions) const;
  // Training noise, or nullopt when both parameters are zero.
  std::optional<NoiseModel> training_noise() const;
};

// With probability eps a uniform random action, otherwise argmax(q) with
// ties going to the lowest index. One uniform draw is always consumed.
ActionId epsilon_greedy(const Eigen::VectorXd& q, double eps,
                        RandomStream& rng);

struct TdResult {
  double loss = 0.0;
  QNetwork::Gradients gradient;
};

// Mean over the batch of (y - Q(s, a; net))^2 with
// y = r + gamma * max_a' Q(s', a'; target) for non-terminal samples and
// y = r for terminal ones; the target network is treated as constant.
double td_loss(const QNetwork& net, const QNetwork& target,
               std::span<const Experience> batch, double gamma);
TdResult td_loss_and_gradient(const QNetwork& net, const QNetwork& target,
                              std::span<const Experience> batch, double gamma);

// One plain gradient-descent step on td_loss. Returns the loss before the
// step. Throws NumericalError if the gradient or the new weights are not
// finite.
double td_update(QNetwork& net, const QNetwork& target,
                 std::span<const Experience> batch, double gamma,
                 double learning_rate);

struct EpisodeStats {
  int episode = 0;  // 1-based
  double max_probability = 0.0;
  double epsilon = 0.0;    // value at the end of the episode
  double loss_mean = 0.0;  // mean TD loss of the episode's learning events
  int learning_events = 0; // within this episode
};

struct TrainRecord {
  std::uint64_t seed = 0;
  int n_steps = 0;
  ControlSequence best_sequence;
  double best_probability = 0.0;
  int best_episode = 0;
  std::vector<double> best_probabilities;  // P after every step of that episode
  std::vector<EpisodeStats> episodes;
  std::int64_t learning_events = 0;
  QNetwork network;
  QNetwork target_network;
  double wall_time_seconds = 0.0;
};

struct TrainOptions {
  std::optional<int> n_steps;
  // Called once per finished episode.
  std::function<void(const EpisodeStats&)> on_episode;
  // Called after every target synchronisation with the learning-event count.
  std::function<void(std::int64_t, const QNetwork& net,
                     const QNetwork& target)>
      on_target_sync;
};

// Episodic DQN training from |1>. Per step: epsilon-greedy action on the
// current network, one cached step plus training noise, reward, store the
// experience. Every learning_period steps (once the memory holds a
// minibatch) one td_update on a uniform minibatch, epsilon decays one notch,
// and every target_sync_period learning events the target network copies the
// online one. The last step of an episode is terminal.
TrainRecord train(const DqnConfig& config, const ActionSet& set,
                  const ChainSpec& spec, std::uint64_t seed,
                  const TrainOptions& options = {});
TrainRecord train(const DqnConfig& config, const PropagatorCache& cache,
                  std::uint64_t seed, const TrainOptions& options = {});

struct Rollout {
  Trajectory trajectory;
  ControlSequence actions;
};

// Greedy (epsilon = 0) episode. Actions are picked from the realised,
// possibly noisy, state at every step.
Rollout greedy_rollout(const QNetwork& net, const PropagatorCache& cache,
                       int n_steps, const std::optional<NoiseModel>& noise,
                       RandomStream rng);

}  // namespace qstc

#endif  // QSTC_DQN_HPP_
