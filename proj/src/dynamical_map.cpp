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

#include "memkernel/dynamical_map.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace memkernel {

MapTrajectory compute_V(const KernelSpec& spec, const TimeGrid& grid) {
  const auto kernel = structured_superkernel(spec, grid);
  const Eigen::Index m = static_cast<Eigen::Index>(spec.dimension) * spec.dimension;
  StructuredMatrixKernel k = kernel;
  k.dim = m;
  auto traj = solve_linear_system(k, Eigen::MatrixXcd::Identity(m, m), grid);
  MapTrajectory out{grid, spec.dimension, std::move(traj.values), MapProvenance::DirectSolve, -1};
  return out;
}

MapTrajectory compute_V0(const KernelSpec& spec, const TimeGrid& grid) {
  const auto validation = validate_spec(spec, grid);
  if (!validation.ok) throw std::invalid_argument("compute_V0: " + validation.message);
  const int d = spec.dimension;

  // g_nm for every ordered pair; each scalar equation is solved
  // independently, so Hermiticity of (g_nm) is a checkable property rather
  // than a built-in.
  std::vector<std::vector<Cx>> g(static_cast<std::size_t>(d) * d);
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m)
      g[static_cast<std::size_t>(n) * d + m] =
          solve_scalar(decoherence_kernel(spec, validation, n, m, grid), grid);

  MapTrajectory out{grid, d, {}, MapProvenance::V0ClosedForm, -1};
  out.maps.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    Eigen::VectorXcd diag(static_cast<Eigen::Index>(d) * d);
    for (int col = 0; col < d; ++col)
      for (int row = 0; row < d; ++row)
        diag(static_cast<Eigen::Index>(col) * d + row) =
            g[static_cast<std::size_t>(row) * d + col][j];
    out.maps[j] = diag.asDiagonal();
  }
  return out;
}

std::vector<Eigen::MatrixXcd> structured_convolve(const StructuredMatrixKernel& K,
                                                  const std::vector<Eigen::MatrixXcd>& x,
                                                  const TimeGrid& grid) {
  const std::size_t n = grid.size();
  if (x.size() < n)
    throw std::invalid_argument("structured_convolve: trajectory not on the full grid");
  const double h = grid.step();
  const Eigen::Index rows = x.front().rows();
  const Eigen::Index cols = x.front().cols();

  std::vector<Eigen::MatrixXcd> out(n, Eigen::MatrixXcd::Zero(rows, cols));
  struct ModeState {
    double decay;
    double amplitude;
    Eigen::MatrixXcd hist;
  };
  std::vector<std::vector<ModeState>> mode_states(K.components.size());
  for (std::size_t p = 0; p < K.components.size(); ++p) {
    if (K.components[p].modes) {
      for (const auto& mode : *K.components[p].modes)
        mode_states[p].push_back(
            {std::exp(-mode.rate * h), mode.amplitude, Eigen::MatrixXcd::Zero(rows, cols)});
    }
  }

  Eigen::MatrixXcd w(rows, cols);
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t p = 0; p < K.components.size(); ++p) {
      const auto& comp = K.components[p];
      w = 0.5 * comp.weights[0] * x[j] + 0.5 * comp.weights[j] * x[0];
      if (comp.modes) {
        for (auto& ms : mode_states[p]) w.noalias() += ms.amplitude * ms.hist;
      } else {
        for (std::size_t i = 1; i < j; ++i) w.noalias() += comp.weights[i] * x[j - i];
      }
      out[j].noalias() += h * (comp.mat * w);
    }
    for (std::size_t p = 0; p < K.components.size(); ++p)
      if (K.components[p].modes)
        for (auto& ms : mode_states[p]) ms.hist = ms.decay * (x[j] + ms.hist);
  }
  return out;
}

MapTrajectory dyson_series(const KernelSpec& spec, const TimeGrid& grid, int order) {
  if (order < 0) throw std::invalid_argument("dyson_series: order must be >= 0");
  MapTrajectory v0 = compute_V0(spec, grid);
  if (order == 0) return v0;

  const Eigen::Index m = static_cast<Eigen::Index>(spec.dimension) * spec.dimension;
  const auto cp = structured_cp_part(spec, grid);
  const auto rem = structured_remainder_part(spec, grid);

  std::vector<Eigen::MatrixXcd> sum = v0.maps;
  std::vector<Eigen::MatrixXcd> term = std::move(v0.maps);
  int used = 0;
  for (int k = 1; k <= order; ++k) {
    const auto forcing = structured_convolve(cp, term, grid);
    auto next = solve_linear_system(rem, Eigen::MatrixXcd::Zero(m, m), grid, &forcing);
    term = std::move(next.values);
    double increment = 0.0;
    for (std::size_t j = 0; j < term.size(); ++j) {
      sum[j] += term[j];
      increment = std::max(increment, term[j].cwiseAbs().maxCoeff());
    }
    used = k;
    if (increment < kDysonIncrementTol) break;
  }

  MapTrajectory out{grid, spec.dimension, std::move(sum), MapProvenance::Dyson, used};
  return out;
}

std::vector<Eigen::VectorXcd> evolve_state(const KernelSpec& spec, const TimeGrid& grid,
                                           const Eigen::MatrixXcd& rho0) {
  const auto kernel = structured_superkernel(spec, grid);
  auto traj = solve_linear_system(kernel, stack_matrix(rho0), grid);
  std::vector<Eigen::VectorXcd> out(traj.values.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = traj.values[j].col(0);
  return out;
}

bool is_density_matrix(const Eigen::MatrixXcd& rho, double tol) {
  if (rho.rows() != rho.cols()) return false;
  const double scale = std::max(1.0, rho.norm());
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol * scale) return false;
  if (std::abs(rho.trace() - Cx{1.0, 0.0}) > tol * scale) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()),
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol * scale;
}

Eigen::MatrixXcd apply_map(const Eigen::MatrixXcd& map, const Eigen::MatrixXcd& rho0) {
  if (!is_density_matrix(rho0))
    throw std::invalid_argument("apply_map: initial state is not a density matrix");
  const auto d = rho0.rows();
  if (map.rows() != d * d || map.cols() != d * d)
    throw std::invalid_argument("apply_map: map/state dimension mismatch");
  return unstack_matrix(map * stack_matrix(rho0));
}

Eigen::MatrixXcd choi_matrix(const Eigen::MatrixXcd& map, int dim) {
  const Eigen::Index d = dim;
  if (map.rows() != d * d || map.cols() != d * d)
    throw std::invalid_argument("choi_matrix: map is not d^2 x d^2");
  Eigen::MatrixXcd choi(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      // vec(E_ij) is the unit vector at index j*d + i
      const Eigen::MatrixXcd out = unstack_matrix(map.col(j * d + i));
      for (Eigen::Index n = 0; n < d; ++n)
        for (Eigen::Index m = 0; m < d; ++m) choi(n * d + i, m * d + j) = out(n, m);
    }
  }
  return choi;
}

ChoiSample choi_at(const Eigen::MatrixXcd& map, int dim, double time) {
  ChoiSample s;
  s.time = time;
  s.choi = choi_matrix(map, dim);
  s.hermiticity_defect = (s.choi - s.choi.adjoint()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (s.choi + s.choi.adjoint()),
                                                     Eigen::EigenvaluesOnly);
  s.min_eigenvalue = es.eigenvalues().minCoeff();
  return s;
}

std::vector<double> min_choi_eigenvalues(const MapTrajectory& traj) {
  std::vector<double> out(traj.maps.size());
  for (std::size_t j = 0; j < traj.maps.size(); ++j) {
    const Eigen::MatrixXcd choi = choi_matrix(traj.maps[j], traj.dim);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (choi + choi.adjoint()),
                                                       Eigen::EigenvaluesOnly);
    out[j] = es.eigenvalues().minCoeff();
  }
  return out;
}

double trace_preservation_defect(const MapTrajectory& traj) {
  const Eigen::Index d = traj.dim;
  const Eigen::RowVectorXcd trace_row =
      stack_matrix(Eigen::MatrixXcd::Identity(d, d)).adjoint();
  double defect = 0.0;
  for (const auto& v : traj.maps)
    defect = std::max(defect, (trace_row * v - trace_row).cwiseAbs().maxCoeff());
  return defect;
}

double hermiticity_preservation_defect(const MapTrajectory& traj) {
  const Eigen::Index d = traj.dim;
  double defect = 0.0;
  for (const auto& v : traj.maps) {
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        const Eigen::MatrixXcd vij = unstack_matrix(v.col(j * d + i));
        const Eigen::MatrixXcd vji = unstack_matrix(v.col(i * d + j));
        defect = std::max(defect, (vij.adjoint() - vji).cwiseAbs().maxCoeff());
      }
    }
  }
  return defect;
}

}  // namespace memkernel
