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

#include <string>
#include <vector>

#include "memkernel/kernel_spec.hpp"

namespace memkernel {

enum class MapProvenance { DirectSolve, Dyson, V0ClosedForm };

/// Time-sampled dynamical map V(t_j) as d^2 x d^2 matrices acting on
/// column-stacked density matrices; V(t_0) is the identity. Conventions,
/// fixed once for the whole library:
///   vec      column stacking, entry (r, c) at index c*d + r
///   superop  vec(A rho B) = (B^T (x) A) vec(rho)
///   Choi     (output (x) input): C[(n,i),(m,j)] = <n| V(|i><j|) |m>,
///            positive semidefinite iff the map is completely positive.
struct MapTrajectory {
  TimeGrid grid;
  int dim = 0;  // Hilbert space dimension d
  std::vector<Eigen::MatrixXcd> maps;
  MapProvenance provenance = MapProvenance::DirectSolve;
  int dyson_order = -1;
};

/// Dyson-series defaults: maximum number of completely positive insertions
/// and the sup-norm increment below which the series is considered converged.
inline constexpr int kDysonMaxOrder = 20;
inline constexpr double kDysonIncrementTol = 1e-10;

/// Relative slack for positive-semidefiniteness verdicts: an eigenvalue
/// counts as negative only below -kPsdSlackRel * max(1, matrix norm).
inline constexpr double kPsdSlackRel = 1e-8;

/// Solves the memory-kernel equation V'(t) = (K * V)(t), V(0) = I.
MapTrajectory compute_V(const KernelSpec& spec, const TimeGrid& grid);

/// Auxiliary map V0 in closed form: V0(t) rho = sum_nm g_nm(t) |n><n| rho
/// |m><m|, with each g_nm solved from its scalar decoherence equation. As a
/// superoperator this is diagonal.
MapTrajectory compute_V0(const KernelSpec& spec, const TimeGrid& grid);

/// Partial sum of the Dyson expansion V = V0 + V0*B*V0 + ... with `order`
/// insertions of the completely positive part B. Each insertion solves the
/// forced equation T_k' = (C * T_k) + (B * T_{k-1}), T_k(0) = 0, with the
/// same quadrature as compute_V, so the partial sums converge to the direct
/// solution on the same grid. Stops early once the sup-norm increment drops
/// below kDysonIncrementTol.
MapTrajectory dyson_series(const KernelSpec& spec, const TimeGrid& grid, int order);

/// Trapezoidal convolution (K * x)(t_j) of a structured kernel with a
/// sampled trajectory.
std::vector<Eigen::MatrixXcd> structured_convolve(const StructuredMatrixKernel& K,
                                                  const std::vector<Eigen::MatrixXcd>& x,
                                                  const TimeGrid& grid);

/// Evolves one density matrix: rho'(t) = (K * rho)(t) stacked as a vector.
/// Returns vec(rho(t_j)).
std::vector<Eigen::VectorXcd> evolve_state(const KernelSpec& spec, const TimeGrid& grid,
                                           const Eigen::MatrixXcd& rho0);

/// rho(t) = unstack(V vec(rho0)). rho0 must be a density matrix (Hermitian,
/// unit trace, positive semidefinite within tolerance); the output is
/// Hermitian and unit trace but may fail positivity, which is exactly what
/// the certifier detects.
Eigen::MatrixXcd apply_map(const Eigen::MatrixXcd& map, const Eigen::MatrixXcd& rho0);

bool is_density_matrix(const Eigen::MatrixXcd& rho, double tol = 1e-9);

/// Choi matrix of a map in the (output (x) input) arrangement.
Eigen::MatrixXcd choi_matrix(const Eigen::MatrixXcd& map, int dim);

struct ChoiSample {
  double time = 0.0;
  Eigen::MatrixXcd choi;
  double min_eigenvalue = 0.0;
  double hermiticity_defect = 0.0;  // max |C - C^dag| entry
};

ChoiSample choi_at(const Eigen::MatrixXcd& map, int dim, double time = 0.0);

/// Minimum Choi eigenvalue at every sample of the trajectory.
std::vector<double> min_choi_eigenvalues(const MapTrajectory& traj);

/// max_j max_rho | tr V(t_j) rho - tr rho |, evaluated through the stacked
/// identity row; zero for a trace-preserving trajectory.
double trace_preservation_defect(const MapTrajectory& traj);

/// max_j max_ij | V(E_ij)^dag - V(E_ji) |; zero when Hermiticity is
/// preserved.
double hermiticity_preservation_defect(const MapTrajectory& traj);

}  // namespace memkernel
