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

#ifndef QSTC_PARALLEL_HPP_
#define QSTC_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace qstc {

// Fixed-width fan-out for independent jobs. Jobs are indexed, so callers
// write results into pre-sized slots and aggregation never depends on which
// thread finished first.
class WorkerPool {
 public:
  // workers <= 0 selects std::thread::hardware_concurrency().
  explicit WorkerPool(int workers = 1);

  int size() const { return workers_; }

  // Calls fn(i) for every i in [0, count). Blocks until all calls return;
  // the first exception thrown by any job is rethrown here.
  void parallel_for(std::size_t count,
                    const std::function<void(std::size_t)>& fn) const;

 private:
  int workers_;
};

}  // namespace qstc

#endif  // QSTC_PARALLEL_HPP_
