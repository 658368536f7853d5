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

#include "qstc/actions.hpp"

#include <string>

#include "qstc/error.hpp"

namespace qstc {

std::string_view to_string(ActionSetKind kind) {
  switch (kind) {
    case ActionSetKind::kSiteBySite:
      return "site_by_site";
    case ActionSetKind::kZhang16:
      return "zhang16";
  }
  return "unknown";
}

ActionSetKind parse_action_set_kind(std::string_view text) {
  if (text == "site_by_site") return ActionSetKind::kSiteBySite;
  if (text == "zhang16") return ActionSetKind::kZhang16;
  throw InvalidArgument("unknown action set '" + std::string(text) +
                        "' (expected site_by_site or zhang16)");
}

ActionSet ActionSet::site_by_site(int n, double h) {
  if (n < 2) throw InvalidArgument("site_by_site actions need n >= 2");
  ActionSet set(ActionSetKind::kSiteBySite, n, h);
  set.actions_.reserve(n + 1);
  set.actions_.push_back({0, std::vector<double>(n, 0.0)});
  for (int site = 0; site < n; ++site) {
    Action a{site + 1, std::vector<double>(n, 0.0)};
    a.field_mask[site] = h;
    set.actions_.push_back(std::move(a));
  }
  return set;
}

ActionSet ActionSet::zhang16(int n, double h) {
  if (n < 6) throw InvalidArgument("zhang16 actions need n >= 6");
  ActionSet set(ActionSetKind::kZhang16, n, h);
  set.actions_.reserve(16);
  for (ActionId id = 0; id < 16; ++id) {
    Action a{id, std::vector<double>(n, 0.0)};
    if (id >= 1 && id <= 7) {
      for (int bit = 0; bit < 3; ++bit) {
        if (id & (1 << bit)) a.field_mask[bit] = h;
      }
    } else if (id >= 8 && id <= 14) {
      const int m = id - 7;
      for (int bit = 0; bit < 3; ++bit) {
        if (m & (1 << bit)) a.field_mask[n - 1 - bit] = h;
      }
    } else if (id == 15) {
      a.field_mask.assign(n, h);
    }
    set.actions_.push_back(std::move(a));
  }
  return set;
}

ActionSet ActionSet::make(ActionSetKind kind, int n, double h) {
  switch (kind) {
    case ActionSetKind::kSiteBySite:
      return site_by_site(n, h);
    case ActionSetKind::kZhang16:
      return zhang16(n, h);
  }
  throw InvalidArgument("unknown action set kind");
}

const Action& ActionSet::operator[](ActionId id) const {
  if (!contains(id)) {
    throw InvalidArgument("action id " + std::to_string(id) + " out of range");
  }
  return actions_[id];
}

ActionId zhang16_id_from_mask(std::span<const double> mask) {
  const int n = static_cast<int>(mask.size());
  if (n < 6) throw InvalidArgument("zhang16 masks need n >= 6");
  int head = 0;
  int tail = 0;
  int middle = 0;
  for (int k = 0; k < n; ++k) {
    if (mask[k] == 0.0) continue;
    if (k < 3) {
      head |= 1 << k;
    } else if (k >= n - 3) {
      tail |= 1 << (n - 1 - k);
    } else {
      ++middle;
    }
  }
  int support = 0;
  for (double v : mask) support += v != 0.0;
  if (support == n) return 15;
  if (middle > 0 || (head != 0 && tail != 0)) {
    throw InvalidArgument("mask does not correspond to a zhang16 action");
  }
  if (tail != 0) return 7 + tail;
  return head;
}

PropagatorCache PropagatorCache::build(const ActionSet& set,
                                       const ChainSpec& spec) {
  spec.validate();
  if (set.n() != spec.n) {
    throw InvalidArgument("action set and chain have different lengths");
  }
  PropagatorCache cache;
  cache.spec_ = spec;
  cache.unitaries_.reserve(set.size());
  for (const Action& a : set.actions()) {
    cache.unitaries_.push_back(
        step_propagator(build_step_hamiltonian(spec, a.field_mask), spec.dt));
  }
  return cache;
}

PropagatorCache PropagatorCache::free_only(const ChainSpec& spec) {
  spec.validate();
  PropagatorCache cache;
  cache.spec_ = spec;
  const std::vector<double> zero(spec.n, 0.0);
  cache.unitaries_.push_back(
      step_propagator(build_step_hamiltonian(spec, zero), spec.dt));
  return cache;
}

const StepUnitary& PropagatorCache::operator[](ActionId id) const {
  if (!contains(id)) {
    throw InvalidArgument("unknown action index " + std::to_string(id));
  }
  return unitaries_[id];
}

}  // namespace qstc
