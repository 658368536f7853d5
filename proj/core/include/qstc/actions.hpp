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

#ifndef QSTC_ACTIONS_HPP_
#define QSTC_ACTIONS_HPP_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "qstc/chain.hpp"

namespace qstc {

using ActionId = std::int32_t;

// Ordered action indices, one per control bin. Doubles as the GA genome.
using ControlSequence = std::vector<ActionId>;

enum class ActionSetKind {
  kSiteBySite,  // action 0: no field; action k: field h on site k only
  kZhang16,     // 16 binary-coded patterns on the two ends of the chain
};

std::string_view to_string(ActionSetKind kind);
// Accepts "site_by_site" and "zhang16". Throws InvalidArgument otherwise.
ActionSetKind parse_action_set_kind(std::string_view text);

struct Action {
  ActionId id = 0;
  std::vector<double> field_mask;  // one entry per site, each 0 or h
};

class ActionSet {
 public:
  // n + 1 actions. Throws InvalidArgument for n < 2.
  static ActionSet site_by_site(int n, double h);

  // Sixteen actions; requires n >= 6 so the two end triplets are disjoint.
  //   0       no field
  //   1..7    bit b of id puts h on site b+1 (sites 1..3)
  //   8..14   bit b of (id - 7) puts h on site N-b (sites N-2..N)
  //   15      h on every site
  static ActionSet zhang16(int n, double h);

  static ActionSet make(ActionSetKind kind, int n, double h);

  ActionSetKind kind() const { return kind_; }
  int n() const { return n_; }
  double field_strength() const { return h_; }
  int size() const { return static_cast<int>(actions_.size()); }
  const std::vector<Action>& actions() const { return actions_; }
  const Action& operator[](ActionId id) const;
  bool contains(ActionId id) const { return id >= 0 && id < size(); }

 private:
  ActionSet(ActionSetKind kind, int n, double h) : kind_(kind), n_(n), h_(h) {}

  ActionSetKind kind_;
  int n_;
  double h_;
  std::vector<Action> actions_;
};

// Inverse of the zhang16 encoding: recovers the id from the support of a
// field mask. Throws InvalidArgument if the support matches no action.
ActionId zhang16_id_from_mask(std::span<const double> mask);

// One exact step unitary per action, for a fixed (N, J, h, dt). Immutable
// after construction and safe to share between threads.
class PropagatorCache {
 public:
  // Throws InvalidArgument when set.n() != spec.n.
  static PropagatorCache build(const ActionSet& set, const ChainSpec& spec);
  // Single entry (id 0): the field-free step.
  static PropagatorCache free_only(const ChainSpec& spec);

  const ChainSpec& spec() const { return spec_; }
  int n() const { return spec_.n; }
  int size() const { return static_cast<int>(unitaries_.size()); }
  bool contains(ActionId id) const { return id >= 0 && id < size(); }
  // Throws InvalidArgument for an unknown id.
  const StepUnitary& operator[](ActionId id) const;
  const std::vector<StepUnitary>& unitaries() const { return unitaries_; }

 private:
  ChainSpec spec_;
  std::vector<StepUnitary> unitaries_;
};

}  // namespace qstc

#endif  // QSTC_ACTIONS_HPP_
