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

#ifndef QSTC_RANDOM_HPP_
#define QSTC_RANDOM_HPP_

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string_view>

namespace qstc {

// Mixes an ordered list of 64-bit words into a single stream id. Used to give
// every (generation, individual), (cell, run), ... its own independent stream.
std::uint64_t derive_stream_id(std::initializer_list<std::uint64_t> parts);

// Stable 64-bit tag for a label such as "ga.init"; FNV-1a.
std::uint64_t stream_tag(std::string_view label);

// Deterministic random stream keyed by (seed, stream_id).
//
// The generator is xoshiro256** whose state is expanded from the key with
// splitmix64, so any key can be constructed directly without advancing a
// parent generator. All samplers are written out here (no <random>
// distributions) so draws are identical across standard libraries.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer on [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  // Independent child stream sharing this stream's seed.
  RandomStream child(std::uint64_t key) const {
    return RandomStream(seed_, derive_stream_id({stream_id_, key}));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return next_u64(); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::array<std::uint64_t, 4> s_;
};

}  // namespace qstc

#endif  // QSTC_RANDOM_HPP_
