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

#include "memkernel/volterra.hpp"

#include <cmath>
#include <stdexcept>

namespace memkernel {

namespace {

constexpr double kStepGuard = 0.1;

}  // namespace

ScalarKernel ScalarKernel::negated() const {
  ScalarKernel out = *this;
  for (auto& v : out.samples) v = -v;
  if (out.modes)
    for (auto& m : *out.modes) m.amplitude = -m.amplitude;
  return out;
}

double ScalarKernel::max_magnitude() const {
  double m = 0.0;
  for (const auto& v : samples) m = std::max(m, std::abs(v));
  return m;
}

ScalarKernel make_scalar_kernel(const ScalarFn& re, const ScalarFn& im, const TimeGrid& grid) {
  ScalarKernel k;
  k.samples.resize(grid.size());
  const auto rs = re.sample(grid);
  const auto is = im.sample(grid);
  for (std::size_t j = 0; j < k.samples.size(); ++j) k.samples[j] = Cx{rs[j], is[j]};
  const auto rterms = re.exp_terms();
  const auto iterms = im.exp_terms();
  if (rterms && iterms) {
    std::vector<CxExpTerm> modes;
    for (const auto& t : *rterms) modes.push_back({Cx{t.amplitude, 0.0}, t.rate});
    for (const auto& t : *iterms) modes.push_back({Cx{0.0, t.amplitude}, t.rate});
    k.modes = std::move(modes);
  }
  return k;
}

ScalarKernel make_scalar_kernel(const ScalarFn& re, const TimeGrid& grid) {
  return make_scalar_kernel(re, ScalarFn::zero(), grid);
}

double SampledMatrixKernel::max_inf_norm() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, s.cwiseAbs().rowwise().sum().maxCoeff());
  return m;
}

Eigen::MatrixXcd StructuredMatrixKernel::at(std::size_t j) const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& c : components) out += c.weights.at(j) * c.mat;
  return out;
}

double StructuredMatrixKernel::max_inf_norm_bound() const {
  if (components.empty()) return 0.0;
  const std::size_t n = components.front().weights.size();
  std::vector<double> mat_norms;
  mat_norms.reserve(components.size());
  for (const auto& c : components)
    mat_norms.push_back(c.mat.cwiseAbs().rowwise().sum().maxCoeff());
  double m = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double v = 0.0;
    for (std::size_t p = 0; p < components.size(); ++p)
      v += std::abs(components[p].weights[j]) * mat_norms[p];
    m = std::max(m, v);
  }
  return m;
}

void check_step_guard(double step, double kernel_magnitude) {
  if (step * kernel_magnitude > kStepGuard * (1.0 + 1e-12))
    throw std::invalid_argument(
        "Volterra step guard: h * max|kernel| = " + std::to_string(step * kernel_magnitude) +
        " exceeds " + std::to_string(kStepGuard) + "; refine the grid");
}

// Product-trapezoidal scheme for x' = (k * x) + forcing, scalar unknown.
//
// With F_j the trapezoidal convolution at t_j (which contains the unknown x_j
// through the i = 0 endpoint weight h/2 k_0), integrating x' by the
// trapezoidal rule gives the per-step correction
//   (1 - (h^2/4) k_0) x_j = x_{j-1} + (h/2)(F_{j-1} + E_j) + forcing terms,
// where E_j is the explicit part of F_j. The telescoped branch maintains one
// geometric history sum per exponential mode; it evaluates the identical
// quadrature formula.
namespace {

std::vector<Cx> scalar_core(const ScalarKernel& k, Cx x0, const TimeGrid& grid,
                            const std::vector<Cx>* forcing) {
  const std::size_t n = grid.size();
  if (k.samples.size() < n)
    throw std::invalid_argument("solve_scalar_volterra: kernel not sampled on the full grid");
  if (forcing && forcing->size() < n)
    throw std::invalid_argument("solve_scalar_volterra: forcing not sampled on the full grid");
  check_step_guard(grid.step(), k.max_magnitude());

  const double h = grid.step();
  const Cx k0 = k.samples[0];
  const Cx alpha = Cx{1.0, 0.0} - (h * h / 4.0) * k0;

  std::vector<Cx> x(n);
  x[0] = x0;
  Cx f_prev{0.0, 0.0};  // F_0 = 0: empty convolution interval

  // History sums H_m(j) = sum_{i=1}^{j-1} e^{-g_m i h} x_{j-i}; the update to
  // H_m(j+1) = e^{-g_m h} (x_j + H_m(j)) runs at the end of each step.
  const bool telescoped = k.modes.has_value();
  std::vector<Cx> hist;
  std::vector<double> decay;
  if (telescoped) {
    hist.assign(k.modes->size(), Cx{0.0, 0.0});
    decay.resize(k.modes->size());
    for (std::size_t m = 0; m < k.modes->size(); ++m) decay[m] = std::exp(-(*k.modes)[m].rate * h);
  }

  for (std::size_t j = 1; j < n; ++j) {
    Cx e_j;
    if (telescoped) {
      Cx acc{0.0, 0.0};
      for (std::size_t m = 0; m < hist.size(); ++m) acc += (*k.modes)[m].amplitude * hist[m];
      e_j = h * (0.5 * k.samples[j] * x[0] + acc);
    } else {
      Cx acc{0.0, 0.0};
      for (std::size_t i = 1; i < j; ++i) acc += k.samples[i] * x[j - i];
      e_j = h * (0.5 * k.samples[j] * x[0] + acc);
    }
    Cx rhs = x[j - 1] + (h / 2.0) * (f_prev + e_j);
    if (forcing) rhs += (h / 2.0) * ((*forcing)[j - 1] + (*forcing)[j]);
    x[j] = rhs / alpha;
    f_prev = e_j + (h / 2.0) * k0 * x[j];
    if (telescoped)
      for (std::size_t m = 0; m < hist.size(); ++m) hist[m] = decay[m] * (x[j] + hist[m]);
  }
  return x;
}

}  // namespace

std::vector<Cx> solve_scalar_volterra(const ScalarKernel& k, Cx x0, const TimeGrid& grid) {
  return scalar_core(k, x0, grid, nullptr);
}

std::vector<Cx> solve_scalar(const ScalarKernel& z, const TimeGrid& grid) {
  return scalar_core(z.negated(), Cx{1.0, 0.0}, grid, nullptr);
}

SystemTrajectory solve_linear_system(const SampledMatrixKernel& K, const Eigen::MatrixXcd& X0,
                                     const TimeGrid& grid) {
  const std::size_t n = grid.size();
  if (K.samples.size() < n)
    throw std::invalid_argument("solve_linear_system: kernel not sampled on the full grid");
  const Eigen::Index m = K.dim();
  if (X0.rows() != m)
    throw std::invalid_argument("solve_linear_system: initial condition dimension mismatch");
  for (const auto& s : K.samples)
    if (s.rows() != m || s.cols() != m)
      throw std::invalid_argument("solve_linear_system: non-square or inconsistent kernel sample");
  check_step_guard(grid.step(), K.max_inf_norm());

  const double h = grid.step();
  const Eigen::MatrixXcd& k0 = K.samples[0];
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(m, m) - (h * h / 4.0) * k0;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);

  SystemTrajectory out{grid, {}};
  out.values.resize(n);
  out.values[0] = X0;
  Eigen::MatrixXcd f_prev = Eigen::MatrixXcd::Zero(m, X0.cols());

  for (std::size_t j = 1; j < n; ++j) {
    Eigen::MatrixXcd e_j = 0.5 * (K.samples[j] * X0);
    for (std::size_t i = 1; i < j; ++i) e_j.noalias() += K.samples[i] * out.values[j - i];
    e_j *= h;
    Eigen::MatrixXcd rhs = out.values[j - 1] + (h / 2.0) * (f_prev + e_j);
    out.values[j] = lu.solve(rhs);
    f_prev = e_j + (h / 2.0) * (k0 * out.values[j]);
  }
  return out;
}

SystemTrajectory solve_linear_system(const StructuredMatrixKernel& K, const Eigen::MatrixXcd& X0,
                                     const TimeGrid& grid,
                                     const std::vector<Eigen::MatrixXcd>* forcing) {
  const std::size_t n = grid.size();
  const Eigen::Index m = K.dim;
  if (X0.rows() != m)
    throw std::invalid_argument("solve_linear_system: initial condition dimension mismatch");
  for (const auto& c : K.components) {
    if (c.weights.size() < n)
      throw std::invalid_argument("solve_linear_system: component weights not on the full grid");
    if (c.mat.rows() != m || c.mat.cols() != m)
      throw std::invalid_argument("solve_linear_system: component matrix dimension mismatch");
  }
  if (forcing && forcing->size() < n)
    throw std::invalid_argument("solve_linear_system: forcing not sampled on the full grid");
  check_step_guard(grid.step(), K.max_inf_norm_bound());

  const double h = grid.step();
  const std::size_t np = K.components.size();
  Eigen::MatrixXcd k0 = Eigen::MatrixXcd::Zero(m, m);
  for (const auto& c : K.components) k0 += c.weights[0] * c.mat;
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(m, m) - (h * h / 4.0) * k0;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);

  SystemTrajectory out{grid, {}};
  out.values.resize(n);
  out.values[0] = X0;
  Eigen::MatrixXcd f_prev = Eigen::MatrixXcd::Zero(m, X0.cols());

  // Per-component weighted history sums. Components with exponential modes
  // keep one decaying sum per mode; the rest accumulate the O(j) way.
  struct ModeState {
    double decay = 1.0;
    double amplitude = 0.0;
    Eigen::MatrixXcd hist;
  };
  std::vector<std::vector<ModeState>> mode_states(np);
  std::vector<bool> telescoped(np, false);
  for (std::size_t p = 0; p < np; ++p) {
    if (K.components[p].modes) {
      telescoped[p] = true;
      for (const auto& mode : *K.components[p].modes)
        mode_states[p].push_back(
            {std::exp(-mode.rate * h), mode.amplitude, Eigen::MatrixXcd::Zero(m, X0.cols())});
    }
  }

  Eigen::MatrixXcd w(m, X0.cols()), e_j(m, X0.cols()), rhs(m, X0.cols());
  for (std::size_t j = 1; j < n; ++j) {
    e_j.setZero();
    for (std::size_t p = 0; p < np; ++p) {
      const auto& comp = K.components[p];
      w = 0.5 * comp.weights[j] * X0;
      if (telescoped[p]) {
        for (auto& ms : mode_states[p]) w.noalias() += ms.amplitude * ms.hist;
      } else {
        for (std::size_t i = 1; i < j; ++i) w.noalias() += comp.weights[i] * out.values[j - i];
      }
      e_j.noalias() += comp.mat * w;
    }
    e_j *= h;
    rhs = out.values[j - 1] + (h / 2.0) * (f_prev + e_j);
    if (forcing) rhs += (h / 2.0) * ((*forcing)[j - 1] + (*forcing)[j]);
    out.values[j] = lu.solve(rhs);
    f_prev = e_j + (h / 2.0) * (k0 * out.values[j]);
    for (std::size_t p = 0; p < np; ++p)
      if (telescoped[p])
        for (auto& ms : mode_states[p]) ms.hist = ms.decay * (out.values[j] + ms.hist);
  }
  return out;
}

}  // namespace memkernel
