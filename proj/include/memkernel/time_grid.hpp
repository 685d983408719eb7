// Copyright 2026 The memkernel Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace memkernel {

/// Uniform time grid t_j = j*h, j = 0..steps. All trajectories, kernels and
/// quadratures in this library are sampled on such grids.
class TimeGrid {
 public:
  /// Default: the minimal valid grid (one unit step); trajectory containers
  /// replace it on construction.
  TimeGrid() : step_(1.0), steps_(1) {}

  TimeGrid(double step, std::size_t steps) : step_(step), steps_(steps) {
    if (!(step > 0.0)) throw std::invalid_argument("TimeGrid: step must be > 0");
    if (steps == 0) throw std::invalid_argument("TimeGrid: need at least one step");
  }

  double step() const { return step_; }
  std::size_t steps() const { return steps_; }
  /// Number of samples, steps + 1 (t_0 = 0 included).
  std::size_t size() const { return steps_ + 1; }
  double time(std::size_t j) const { return static_cast<double>(j) * step_; }
  double horizon() const { return time(steps_); }

  std::vector<double> times() const {
    std::vector<double> t(size());
    for (std::size_t j = 0; j < t.size(); ++j) t[j] = time(j);
    return t;
  }

  /// Grid with the same horizon and half the step, used for Richardson
  /// error estimation.
  TimeGrid halved() const { return TimeGrid(step_ / 2.0, steps_ * 2); }

 private:
  double step_;
  std::size_t steps_;
};

}  // namespace memkernel
