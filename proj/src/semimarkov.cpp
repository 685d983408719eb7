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

#include "memkernel/semimarkov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "memkernel/parallel.hpp"

namespace memkernel {

namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
  s += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

void check_jump_matrix(const Eigen::MatrixXd& pi) {
  if (pi.rows() != pi.cols()) throw std::invalid_argument("jump matrix must be square");
  for (Eigen::Index m = 0; m < pi.cols(); ++m) {
    double colsum = 0.0;
    for (Eigen::Index n = 0; n < pi.rows(); ++n) {
      if (pi(n, m) < 0.0) throw std::invalid_argument("jump matrix has negative entries");
      colsum += pi(n, m);
    }
    if (std::abs(colsum - 1.0) > 1e-10)
      throw std::invalid_argument("jump matrix columns must sum to 1");
  }
}

}  // namespace

TrajectoryRng::TrajectoryRng(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t s = master_seed ^ (0x9E3779B97F4A7C15ULL * (index + 0x632BE59BD9B4E019ULL));
  for (auto& word : state_) word = splitmix64(s);
}

std::uint64_t TrajectoryRng::next_raw() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double TrajectoryRng::uniform() { return static_cast<double>(next_raw() >> 11) * 0x1.0p-53; }

WaitingTimeTable waiting_time_table(const ScalarFn& k, const TimeGrid& grid) {
  WaitingTimeTable table{grid, {}, {}, 1.0, true, std::nullopt, std::nullopt};
  const auto kernel = make_scalar_kernel(k, grid);
  const auto g = solve_scalar(kernel, grid);
  const auto ks = k.sample(grid);

  const std::size_t n = grid.size();
  table.survival.resize(n);
  for (std::size_t j = 0; j < n; ++j) table.survival[j] = g[j].real();

  // f = (k * g) by the same trapezoidal product quadrature
  const double h = grid.step();
  table.density.assign(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    double acc = 0.5 * ks[0] * table.survival[j] + 0.5 * ks[j] * table.survival[0];
    for (std::size_t i = 1; i < j; ++i) acc += ks[i] * table.survival[j - i];
    table.density[j] = h * acc;
  }
  table.defect = table.survival.back();

  double max_f = 0.0;
  for (double f : table.density) max_f = std::max(max_f, std::abs(f));
  const double tol = kClassicalTolRel * max_f;
  for (std::size_t j = 0; j < n; ++j) {
    if (!table.first_invalid_time && table.density[j] < -tol) {
      table.classically_valid = false;
      table.first_invalid_time = grid.time(j);
    }
    if (!table.first_negative_survival_time && table.survival[j] < -1e-12)
      table.first_negative_survival_time = grid.time(j);
  }
  return table;
}

std::optional<double> sample_waiting_time(const WaitingTimeTable& table, double u) {
  if (!table.classically_valid)
    throw std::invalid_argument("sample_waiting_time: table is not classically valid");
  const auto& g = table.survival;
  if (u >= g.front()) return 0.0;
  if (u < table.defect) return std::nullopt;

  // first index with g[idx] <= u (g is nonincreasing on a valid table)
  std::size_t lo = 0, hi = g.size() - 1;
  while (lo + 1 < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (g[mid] <= u)
      hi = mid;
    else
      lo = mid;
  }
  const std::size_t idx = g[lo] <= u ? lo : hi;
  if (g[idx] == u) return table.grid.time(idx);
  const double g0 = g[idx - 1], g1 = g[idx];
  const double span = g0 - g1;
  if (span <= 0.0) return table.grid.time(idx - 1);
  const double w = (g0 - u) / span;
  return table.grid.time(idx - 1) + w * table.grid.step();
}

TrajectoryRecord simulate_trajectory(const Eigen::MatrixXd& pi,
                                     const std::vector<WaitingTimeTable>& tables, int start_site,
                                     double horizon, std::uint64_t master_seed,
                                     std::uint64_t index) {
  check_jump_matrix(pi);
  const int sites = static_cast<int>(pi.rows());
  if (static_cast<int>(tables.size()) != sites)
    throw std::invalid_argument("simulate_trajectory: one waiting-time table per site required");
  if (start_site < 0 || start_site >= sites)
    throw std::invalid_argument("simulate_trajectory: start site out of range");

  TrajectoryRecord rec;
  rec.start_site = start_site;
  rec.horizon = horizon;
  rec.index = index;
  TrajectoryRng rng(master_seed, index);

  double t = 0.0;
  int site = start_site;
  for (;;) {
    const auto wait = sample_waiting_time(tables[site], rng.uniform());
    if (!wait) break;  // censored: no jump within the table horizon
    const double t_jump = t + *wait;
    if (t_jump > horizon) break;
    const double u = rng.uniform();
    double cum = 0.0;
    int next = sites - 1;
    for (int n = 0; n < sites; ++n) {
      cum += pi(n, site);
      if (u < cum) {
        next = n;
        break;
      }
    }
    rec.events.push_back({t_jump, site, next});
    site = next;
    t = t_jump;
  }
  rec.final_site = site;
  return rec;
}

std::vector<TrajectoryRecord> simulate_ensemble(const Eigen::MatrixXd& pi,
                                                const std::vector<WaitingTimeTable>& tables,
                                                int start_site, double horizon, std::size_t count,
                                                std::uint64_t master_seed, unsigned threads) {
  std::vector<TrajectoryRecord> ensemble(count);
  parallel_for(0, count, threads, [&](std::size_t i) {
    ensemble[i] = simulate_trajectory(pi, tables, start_site, horizon, master_seed,
                                      static_cast<std::uint64_t>(i));
  });
  return ensemble;
}

PopulationEstimate estimate_populations(const std::vector<TrajectoryRecord>& ensemble,
                                        int num_sites, const TimeGrid& grid) {
  if (ensemble.empty()) throw std::invalid_argument("estimate_populations: empty ensemble");
  const std::size_t n = grid.size();
  const double h = grid.step();

  // occupancy via difference counting: +1 at the first grid index of each
  // sojourn, -1 one past its last
  std::vector<std::vector<long long>> diff(num_sites, std::vector<long long>(n + 1, 0));
  auto first_index_at_or_after = [&](double t) {
    if (t <= 0.0) return std::size_t{0};
    const double x = t / h;
    auto j = static_cast<std::size_t>(std::ceil(x - 1e-12));
    return std::min(j, n);
  };
  for (const auto& rec : ensemble) {
    int site = rec.start_site;
    std::size_t j_from = 0;
    for (const auto& ev : rec.events) {
      const std::size_t j_to = first_index_at_or_after(ev.time);
      if (j_to > j_from) {
        diff[site][j_from] += 1;
        diff[site][j_to] -= 1;
      }
      site = ev.to;
      j_from = j_to;
    }
    diff[site][j_from] += 1;
    diff[site][n] -= 1;
    // the final sojourn covers every remaining grid point up to the horizon
  }

  PopulationEstimate est;
  est.grid = grid;
  est.count = ensemble.size();
  est.p_hat.resize(num_sites, static_cast<Eigen::Index>(n));
  est.std_err.resize(num_sites, static_cast<Eigen::Index>(n));
  const double count = static_cast<double>(ensemble.size());
  for (int s = 0; s < num_sites; ++s) {
    long long running = 0;
    for (std::size_t j = 0; j < n; ++j) {
      running += diff[s][j];
      const double p = static_cast<double>(running) / count;
      est.p_hat(s, static_cast<Eigen::Index>(j)) = p;
      est.std_err(s, static_cast<Eigen::Index>(j)) = std::sqrt(std::max(0.0, p * (1.0 - p)) / count);
    }
  }
  return est;
}

SampledMatrixKernel gme_kernel(const ClassicalAnnotation& classical, const TimeGrid& grid) {
  check_jump_matrix(classical.pi);
  const int d = static_cast<int>(classical.pi.rows());
  if (static_cast<int>(classical.k.size()) != d)
    throw std::invalid_argument("gme_kernel: one rate function per site required");
  std::vector<std::vector<double>> ks(d);
  for (int m = 0; m < d; ++m) ks[m] = classical.k[m].sample(grid);

  SampledMatrixKernel kernel;
  kernel.samples.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(d, d);
    for (int m = 0; m < d; ++m) {
      for (int n = 0; n < d; ++n) q(n, m) += classical.pi(n, m) * ks[m][j];
      q(m, m) -= ks[m][j];
    }
    kernel.samples[j] = q;
  }
  return kernel;
}

Eigen::MatrixXd solve_gme(const ClassicalAnnotation& classical, const Eigen::VectorXd& p0,
                          const TimeGrid& grid) {
  const auto kernel = gme_kernel(classical, grid);
  const auto traj = solve_linear_system(kernel, p0.cast<Cx>(), grid);
  Eigen::MatrixXd out(p0.size(), static_cast<Eigen::Index>(grid.size()));
  for (std::size_t j = 0; j < grid.size(); ++j)
    out.col(static_cast<Eigen::Index>(j)) = traj.values[j].col(0).real();
  return out;
}

}  // namespace memkernel
