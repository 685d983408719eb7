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

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "memkernel/scalar_fn.hpp"
#include "memkernel/time_grid.hpp"

namespace memkernel {

using Cx = std::complex<double>;

/// One complex-amplitude exponential mode a * exp(-rate * tau), rate >= 0
/// and real. The decoherence kernels z_n + z_m^* are sums of such modes
/// whenever the underlying profiles are constants or exponential sums.
struct CxExpTerm {
  Cx amplitude{0.0, 0.0};
  double rate = 0.0;
};

/// Scalar convolution kernel sampled on the solver grid. When `modes` is set
/// the kernel is exactly sum of exponentials; the solver then updates the
/// convolution history in O(1) per step (same quadrature, telescoped sums).
struct ScalarKernel {
  std::vector<Cx> samples;
  std::optional<std::vector<CxExpTerm>> modes;

  ScalarKernel negated() const;
  double max_magnitude() const;
};

/// Builds a sampled scalar kernel from real and imaginary parts.
ScalarKernel make_scalar_kernel(const ScalarFn& re, const ScalarFn& im, const TimeGrid& grid);
ScalarKernel make_scalar_kernel(const ScalarFn& re, const TimeGrid& grid);

/// Matrix kernel given sample-by-sample. samples[j] is the m x m kernel at
/// t_j. This is the general route; memory is O(N m^2).
struct SampledMatrixKernel {
  std::vector<Eigen::MatrixXcd> samples;

  Eigen::Index dim() const { return samples.empty() ? 0 : samples.front().rows(); }
  double max_inf_norm() const;
};

/// Matrix kernel in separated form K(tau) = sum_p f_p(tau) * S_p with real
/// scalar profiles f_p and constant matrices S_p. Memory-kernel superoperators
/// always have this shape; grouping channels by shared profile keeps p small.
struct StructuredMatrixKernel {
  struct Component {
    std::vector<double> weights;               // f_p on the grid
    std::optional<std::vector<ExpTerm>> modes; // exact exponential structure
    Eigen::MatrixXcd mat;                      // S_p
  };
  std::vector<Component> components;
  Eigen::Index dim = 0;

  Eigen::MatrixXcd at(std::size_t j) const;
  double max_inf_norm_bound() const;
};

/// Scalar trajectory x(t_j) on the grid.
struct ScalarTrajectory {
  TimeGrid grid;
  std::vector<Cx> values;
};

/// Vector/matrix trajectory; values[j] has the shape of the initial condition.
struct SystemTrajectory {
  TimeGrid grid;
  std::vector<Eigen::MatrixXcd> values;
};

/// Step-size guard: h * (max kernel magnitude) must stay <= 0.1 so the
/// implicit per-step correction is well conditioned. Violations throw.
void check_step_guard(double step, double kernel_magnitude);

/// Solves x'(t) = (k * x)(t), x(0) = x0, by product-trapezoidal quadrature on
/// the grid. Second-order accurate; the step-0 convolution weight h/2 k(0)
/// makes each step mildly implicit.
std::vector<Cx> solve_scalar_volterra(const ScalarKernel& k, Cx x0, const TimeGrid& grid);

/// Decoherence-equation form g'(t) = -(z * g)(t), g(0) = 1. This is the shape
/// of the scalar equations for the functions g_nm and the survival
/// probabilities; note the built-in minus sign.
std::vector<Cx> solve_scalar(const ScalarKernel& z, const TimeGrid& grid);

/// Solves X'(t) = (K * X)(t), X(0) = X0 (each column independently) for a
/// sampled matrix kernel.
SystemTrajectory solve_linear_system(const SampledMatrixKernel& K, const Eigen::MatrixXcd& X0,
                                     const TimeGrid& grid);

/// Same equation for a structured kernel, optionally with an inhomogeneity:
/// X'(t) = (K * X)(t) + forcing(t). The forcing, when present, must be
/// sampled on the grid; it is integrated with the same trapezoidal rule.
SystemTrajectory solve_linear_system(const StructuredMatrixKernel& K, const Eigen::MatrixXcd& X0,
                                     const TimeGrid& grid,
                                     const std::vector<Eigen::MatrixXcd>* forcing = nullptr);

namespace detail {
inline double sample_norm(const Cx& v) { return std::abs(v); }
inline double sample_norm(const Eigen::MatrixXcd& v) { return v.norm(); }
}  // namespace detail

template <typename Value>
struct RefineResult {
  std::vector<Value> values;       // solution on the requested grid
  std::vector<Value> fine_values;  // solution on the halved grid
  std::vector<double> error;      // |coarse_j - fine_{2j}|, a Richardson bound
  std::vector<std::size_t> flagged;
};

/// Runs `solve` on the grid and on the half-step grid and derives a
/// per-sample error estimate by Richardson comparison. For the second-order
/// scheme the coarse-grid error is about 4/3 of the reported difference;
/// samples whose estimate exceeds `tol` are flagged (a kinked tabulated
/// kernel, for instance, degrades the observed order).
template <typename SolveFn>
auto refine_and_estimate(SolveFn&& solve, const TimeGrid& grid, double tol) {
  auto coarse = solve(grid);
  auto fine = solve(grid.halved());
  using Value = typename std::decay_t<decltype(coarse)>::value_type;
  RefineResult<Value> out{std::move(coarse), std::move(fine), {}, {}};
  out.error.resize(out.values.size());
  for (std::size_t j = 0; j < out.values.size(); ++j) {
    Value diff = out.values[j] - out.fine_values[2 * j];
    out.error[j] = detail::sample_norm(diff);
    if (out.error[j] > tol) out.flagged.push_back(j);
  }
  return out;
}

}  // namespace memkernel
