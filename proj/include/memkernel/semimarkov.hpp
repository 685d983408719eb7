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
#include <cstdint>
#include <optional>
#include <vector>

#include "memkernel/kernel_spec.hpp"

namespace memkernel {

/// Classical-validity tolerance: the waiting-time density may dip below zero
/// by at most kClassicalTolRel * max f before the site is flagged invalid
/// (quadrature noise must not flip verdicts).
inline constexpr double kClassicalTolRel = 1e-10;

/// Survival probability g_n, waiting-time density f_n = (k_n * g_n) and the
/// defect g_n(horizon) for one site. The survival solves g' = -(k * g); the
/// density follows by discrete convolution on the same grid.
struct WaitingTimeTable {
  TimeGrid grid;
  std::vector<double> survival;
  std::vector<double> density;
  double defect = 1.0;  // probability of no jump within the horizon
  bool classically_valid = true;
  std::optional<double> first_invalid_time;            // f below -tolerance
  std::optional<double> first_negative_survival_time;  // g below 0
};

WaitingTimeTable waiting_time_table(const ScalarFn& k, const TimeGrid& grid);

/// Inverse-survival sampling: returns t with g(t) = u by monotone linear
/// interpolation, or nullopt (no jump within the horizon) when u < defect.
/// Requires a classically valid table.
std::optional<double> sample_waiting_time(const WaitingTimeTable& table, double u);

struct JumpEvent {
  double time;
  int from;
  int to;
};

struct TrajectoryRecord {
  std::vector<JumpEvent> events;
  int start_site = 0;
  int final_site = 0;
  double horizon = 0.0;
  std::uint64_t index = 0;  // trajectory index under the master seed
};

/// Deterministic per-trajectory random stream: xoshiro256++ seeded through a
/// SplitMix64 expansion of (master_seed, index). Ensembles are therefore
/// bitwise reproducible under any parallel schedule, independent of the
/// standard library's distribution implementations.
class TrajectoryRng {
 public:
  TrajectoryRng(std::uint64_t master_seed, std::uint64_t index);
  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform();
  std::uint64_t next_raw();

 private:
  std::uint64_t state_[4];
};

/// One semi-Markov trajectory: alternating waiting-time draws and
/// pi-distributed jumps until the horizon is reached or the site refuses to
/// jump. pi must be column stochastic; tables must be classically valid.
TrajectoryRecord simulate_trajectory(const Eigen::MatrixXd& pi,
                                     const std::vector<WaitingTimeTable>& tables, int start_site,
                                     double horizon, std::uint64_t master_seed,
                                     std::uint64_t index);

std::vector<TrajectoryRecord> simulate_ensemble(const Eigen::MatrixXd& pi,
                                                const std::vector<WaitingTimeTable>& tables,
                                                int start_site, double horizon,
                                                std::size_t count, std::uint64_t master_seed,
                                                unsigned threads = 0);

/// Occupation frequencies with binomial standard errors on the grid.
struct PopulationEstimate {
  TimeGrid grid;
  Eigen::MatrixXd p_hat;    // sites x samples
  Eigen::MatrixXd std_err;  // sqrt(p(1-p)/count)
  std::size_t count = 0;
};

PopulationEstimate estimate_populations(const std::vector<TrajectoryRecord>& ensemble,
                                        int num_sites, const TimeGrid& grid);

/// Generalized-master-equation kernel Q(n,m; tau) = W(n,m; tau)
/// - delta_nm sum_l W(l,n; tau) for the factorized weights W(n,m) = pi(n,m)
/// k_m. Populations then obey P' = (Q * P).
SampledMatrixKernel gme_kernel(const ClassicalAnnotation& classical, const TimeGrid& grid);

/// Reference populations from the generalized master equation, one column
/// per grid sample.
Eigen::MatrixXd solve_gme(const ClassicalAnnotation& classical, const Eigen::VectorXd& p0,
                          const TimeGrid& grid);

}  // namespace memkernel
