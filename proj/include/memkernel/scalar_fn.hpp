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

#include <optional>
#include <string>
#include <vector>

#include "memkernel/time_grid.hpp"

namespace memkernel {

/// One term a * exp(-rate * tau) of an exponential sum. rate >= 0; a constant
/// contribution is a term with rate == 0.
struct ExpTerm {
  double amplitude = 0.0;
  double rate = 0.0;
};

/// Real-valued function of tau >= 0. This is the representation used for all
/// kernel ingredients: loss profiles c_alpha, level rates k_n and level
/// energies eps_n. Three forms are supported:
///   constant         f(tau) = c
///   exponential-sum  f(tau) = sum_j a_j exp(-gamma_j tau), gamma_j >= 0
///   tabulated        uniform samples, linear interpolation, zero beyond the
///                    last sample
/// Evaluation at tau < 0 is a domain error; kernels live on tau >= 0.
class ScalarFn {
 public:
  enum class Kind { Constant, ExponentialSum, Tabulated };

  static ScalarFn constant(double value);
  static ScalarFn exponential_sum(std::vector<ExpTerm> terms);
  static ScalarFn tabulated(double step, std::vector<double> samples);
  static ScalarFn zero() { return constant(0.0); }

  Kind kind() const { return kind_; }
  double operator()(double tau) const;
  std::vector<double> sample(const TimeGrid& grid) const;

  /// True if the function is identically zero by construction.
  bool is_zero() const;

  /// Structural equality (same kind and same parameters). Used to group
  /// channels that share a profile; near-equal profiles simply do not group.
  bool structurally_equal(const ScalarFn& other) const;

  /// f -> factor * f. Exact for every kind.
  ScalarFn scaled(double factor) const;

  /// a + b for constant/exponential-sum operands. Mixing in a tabulated
  /// function has no exact closed form and throws; callers fall back to
  /// sampling on their working grid.
  static ScalarFn sum(const ScalarFn& a, const ScalarFn& b);

  /// Exponential-sum view (constants become rate-0 terms). Empty when the
  /// function is tabulated.
  std::optional<std::vector<ExpTerm>> exp_terms() const;

  double constant_value() const;
  const std::vector<ExpTerm>& terms() const { return terms_; }
  double table_step() const { return table_step_; }
  const std::vector<double>& table_samples() const { return table_; }

  std::string describe() const;

 private:
  ScalarFn() = default;

  Kind kind_ = Kind::Constant;
  double value_ = 0.0;                // Constant
  std::vector<ExpTerm> terms_;        // ExponentialSum
  double table_step_ = 0.0;           // Tabulated
  std::vector<double> table_;
};

}  // namespace memkernel
