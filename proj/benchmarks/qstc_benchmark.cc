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

#include <vector>

#include <benchmark/benchmark.h>

#include "qstc/actions.hpp"
#include "qstc/dqn.hpp"
#include "qstc/evolution.hpp"
#include "qstc/ga.hpp"

namespace qstc {
namespace {

void BM_PropagatorCache(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ChainSpec spec{n, 1.0, 0.15, 100.0};
  const ActionSet set = ActionSet::site_by_site(n, 100.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(PropagatorCache::build(set, spec));
  }
}
BENCHMARK(BM_PropagatorCache)->Arg(8)->Arg(32)->Arg(64);

void BM_EvolveSequence(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ChainSpec spec{n, 1.0, 0.15, 100.0};
  const PropagatorCache cache =
      PropagatorCache::build(ActionSet::site_by_site(n, 100.0), spec);
  RandomStream rng(1, 1);
  ControlSequence seq(transfer_steps(n, spec.dt));
  for (ActionId& a : seq) a = static_cast<ActionId>(rng.below(n + 1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve_sequence(seq, cache).max_probability);
  }
}
BENCHMARK(BM_EvolveSequence)->Arg(8)->Arg(32)->Arg(64);

void BM_GaGeneration(benchmark::State& state) {
  const int n = 16;
  const ChainSpec spec{n, 1.0, 0.15, 100.0};
  const ActionSet set = ActionSet::site_by_site(n, 100.0);
  GaConfig config = GaConfig{}.scaled_to(512);
  config.max_generations = 2;
  config.target_probability = 1.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_ga(config, set, spec, std::nullopt, 1));
  }
}
BENCHMARK(BM_GaGeneration)->Unit(benchmark::kMillisecond);

void BM_TdUpdate(benchmark::State& state) {
  const int hidden = static_cast<int>(state.range(0));
  RandomStream rng(2, 2);
  QNetwork net({64, hidden, hidden / 3, 33}, rng);
  const QNetwork target = net;
  std::vector<Experience> batch(32);
  for (Experience& e : batch) {
    e.state = Eigen::VectorXd::NullaryExpr(64, [&] { return rng.uniform(-1, 1); });
    e.next_state = e.state;
    e.action = static_cast<ActionId>(rng.below(33));
    e.reward = 1.0;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(td_update(net, target, batch, 0.95, 1e-6));
  }
}
BENCHMARK(BM_TdUpdate)->Arg(120)->Arg(512);

}  // namespace
}  // namespace qstc

BENCHMARK_MAIN();
