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

#include "memkernel/certifier.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace memkernel {

namespace {

double min_eig(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()),
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double psd_slack(const Eigen::MatrixXcd& m, double rel) { return rel * std::max(1.0, m.norm()); }

ConditionVerdict scan_psd(const GMatrixTrajectory& g) {
  ConditionVerdict v;
  for (std::size_t j = 0; j < g.samples.size(); ++j) {
    if (!g.psd[j]) {
      v.holds = false;
      v.first_violation_index = j;
      v.first_violation_time = g.grid.time(j);
      if (j > 0) {
        const double slack = psd_slack(g.samples[j], g.psd_slack_rel);
        v.refined_time = refine_eigenvalue_crossing(g.samples[j - 1], g.samples[j],
                                                    g.grid.time(j - 1), g.grid.time(j), -slack);
      } else {
        v.refined_time = g.grid.time(0);
      }
      break;
    }
  }
  return v;
}

}  // namespace

double refine_eigenvalue_crossing(const Eigen::MatrixXcd& before, const Eigen::MatrixXcd& after,
                                  double t_before, double t_after, double target) {
  double lo = 0.0, hi = 1.0;  // eigenvalue above target at lo, at or below at hi
  for (int iter = 0; iter < 60 && (hi - lo) * (t_after - t_before) > 1e-14; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const Eigen::MatrixXcd interp = (1.0 - mid) * before + mid * after;
    if (min_eig(interp) > target)
      lo = mid;
    else
      hi = mid;
  }
  return t_before + 0.5 * (lo + hi) * (t_after - t_before);
}

GMatrixTrajectory compute_G(const KernelSpec& spec, const TimeGrid& grid, double psd_slack_rel) {
  const auto validation = validate_spec(spec, grid);
  if (!validation.ok) throw std::invalid_argument("compute_G: " + validation.message);
  const int d = spec.dimension;

  std::vector<std::vector<Cx>> g(static_cast<std::size_t>(d) * d);
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m)
      g[static_cast<std::size_t>(n) * d + m] =
          solve_scalar(decoherence_kernel(spec, validation, n, m, grid), grid);

  GMatrixTrajectory out;
  out.grid = grid;
  out.psd_slack_rel = psd_slack_rel;
  out.samples.resize(grid.size());
  out.min_eigenvalues.resize(grid.size());
  out.psd.resize(grid.size());
  double herm = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    Eigen::MatrixXcd m(d, d);
    for (int n = 0; n < d; ++n)
      for (int mm = 0; mm < d; ++mm) m(n, mm) = g[static_cast<std::size_t>(n) * d + mm][j];
    herm = std::max(herm, (m - m.adjoint()).cwiseAbs().maxCoeff());
    out.min_eigenvalues[j] = min_eig(m);
    out.psd[j] = out.min_eigenvalues[j] >= -psd_slack(m, psd_slack_rel);
    out.samples[j] = std::move(m);
  }
  out.hermiticity_defect = herm;
  return out;
}

ConditionVerdict check_cond1(const GMatrixTrajectory& g) { return scan_psd(g); }

TransitionTrajectory compute_T(const ClassicalAnnotation& classical, const TimeGrid& grid) {
  const auto kernel = gme_kernel(classical, grid);
  const Eigen::Index d = classical.pi.rows();
  const auto traj = solve_linear_system(kernel, Eigen::MatrixXcd::Identity(d, d), grid);
  TransitionTrajectory out;
  out.grid = grid;
  out.samples.resize(grid.size());
  double defect = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out.samples[j] = traj.values[j].real();
    for (Eigen::Index m = 0; m < d; ++m)
      defect = std::max(defect, std::abs(out.samples[j].col(m).sum() - 1.0));
  }
  out.column_sum_defect = defect;
  return out;
}

TransitionTrajectory compute_T(const KernelSpec& spec, const TimeGrid& grid) {
  if (!spec.classical)
    throw std::invalid_argument("compute_T: spec carries no classical annotation");
  return compute_T(*spec.classical, grid);
}

Cond2Result check_cond2(const KernelSpec& spec, const TimeGrid& grid, double psd_slack_rel) {
  const auto structure = diagonal_semimarkov_structure(spec, grid);
  if (!structure)
    throw std::invalid_argument(
        "check_cond2: spec is not of the diagonal semi-Markov class "
        "(channels must be scalar profiles times single matrix units)");

  Cond2Result out{ConditionVerdict{}, compute_G(spec, grid, psd_slack_rel),
                  compute_T(*structure, grid)};
  const int d = spec.dimension;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    Eigen::MatrixXcd& m = out.gtilde.samples[j];
    for (int n = 0; n < d; ++n) m(n, n) = Cx{out.transitions.samples[j](n, n), 0.0};
    out.gtilde.min_eigenvalues[j] = min_eig(m);
    out.gtilde.psd[j] = out.gtilde.min_eigenvalues[j] >= -psd_slack(m, psd_slack_rel);
  }
  out.verdict = scan_psd(out.gtilde);
  return out;
}

bool CPReport::all_applicable_pass() const {
  for (const auto* entry : {&classical_valid, &cond1, &cond2, &choi})
    if (entry->verdict == "fail") return false;
  return true;
}

CPReport certify(const KernelSpec& spec, const TimeGrid& grid, const CertifyOptions& options) {
  const auto validation = validate_spec(spec, grid);
  if (!validation.ok) throw std::invalid_argument("certify: " + validation.message);
  const int d = spec.dimension;

  CPReport report;
  report.tol_psd_rel = options.tol_psd_rel;
  report.tol_classical_rel = options.tol_classical_rel;
  report.solver_band = options.solver_band;
  report.grid_step = grid.step();
  report.grid_steps = grid.steps();

  // Classical validity: every waiting-time density nonnegative on the grid.
  report.classical_valid.verdict = "pass";
  for (int n = 0; n < d; ++n) {
    const auto table = waiting_time_table(validation.k[n], grid);
    if (!table.classically_valid) {
      report.classical_valid.verdict = "fail";
      if (!report.classical_valid.earliest_violation_time ||
          *table.first_invalid_time < *report.classical_valid.earliest_violation_time) {
        report.classical_valid.earliest_violation_time = table.first_invalid_time;
        report.classical_valid.refined_time = table.first_invalid_time;
      }
    }
  }

  // COND-1 plus the per-level necessary conditions g_nn >= 0.
  const auto g = compute_G(spec, grid, options.tol_psd_rel);
  report.g_min_eigenvalues = g.min_eigenvalues;
  const auto cond1 = check_cond1(g);
  report.cond1.verdict = cond1.holds ? "pass" : "fail";
  report.cond1.earliest_violation_time = cond1.first_violation_time;
  report.cond1.refined_time = cond1.refined_time;

  const double survival_slack = options.tol_psd_rel;
  for (int n = 0; n < d; ++n) {
    SurvivalEntry entry;
    entry.level = n;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double gn = g.samples[j](n, n).real();
      if (gn < -survival_slack) {
        entry.earliest_negative_time = grid.time(j);
        if (j > 0) {
          const double prev = g.samples[j - 1](n, n).real();
          const double w = (prev + survival_slack) / (prev - gn);
          entry.refined_time = grid.time(j - 1) + w * grid.step();
        } else {
          entry.refined_time = grid.time(0);
        }
        break;
      }
    }
    report.survival.push_back(entry);
  }

  // COND-2 on the diagonal semi-Markov class only; never approximated
  // outside it.
  std::optional<Cond2Result> cond2;
  const auto structure = diagonal_semimarkov_structure(spec, grid);
  if (structure) {
    cond2 = check_cond2(spec, grid, options.tol_psd_rel);
    report.cond2.verdict = cond2->verdict.holds ? "pass" : "fail";
    report.cond2.earliest_violation_time = cond2->verdict.first_violation_time;
    report.cond2.refined_time = cond2->verdict.refined_time;
    report.gtilde_min_eigenvalues = cond2->gtilde.min_eigenvalues;
    if (cond2->transitions.column_sum_defect > 1e-8) {
      std::ostringstream os;
      os << "transition-probability columns deviate from stochasticity by "
         << cond2->transitions.column_sum_defect;
      report.warnings.push_back(os.str());
    }
    for (std::size_t j = 0; j < grid.size(); ++j) {
      for (int n = 0; n < d; ++n) {
        const double t_nn = cond2->transitions.samples[j](n, n);
        const double g_nn = g.samples[j](n, n).real();
        if (t_nn < g_nn - options.solver_band - options.tol_psd_rel) {
          std::ostringstream os;
          os << "return probability T_" << n << n << "(" << grid.time(j)
             << ") fell below the survival probability";
          report.warnings.push_back(os.str());
          j = grid.size();  // one warning is enough
          break;
        }
      }
    }
    if (spec.classical) {
      const double pi_diff = (spec.classical->pi - structure->pi).cwiseAbs().maxCoeff();
      if (pi_diff > 1e-8) {
        std::ostringstream os;
        os << "classical annotation disagrees with channel structure (max pi deviation "
           << pi_diff << ")";
        report.warnings.push_back(os.str());
      }
    }
  } else {
    report.cond2.verdict = "not_applicable";
    if (spec.classical)
      report.warnings.push_back(
          "classical annotation present but the channels are not single matrix units; "
          "cond2 not applicable");
  }

  // Brute-force Choi oracle on the solved dynamical map.
  ChoiMode mode = options.choi_mode;
  if (mode == ChoiMode::Auto)
    mode = (d <= 8 && grid.steps() <= 2000) ? ChoiMode::Full : ChoiMode::Sampled;
  std::vector<std::size_t> choi_indices;
  if (mode == ChoiMode::Full) {
    choi_indices.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) choi_indices[j] = j;
    report.choi_mode_used = "full";
  } else if (mode == ChoiMode::Sampled) {
    const std::size_t count = std::min(options.choi_sample_count, grid.size());
    for (std::size_t i = 0; i < count; ++i)
      choi_indices.push_back(i * grid.steps() / (count > 1 ? count - 1 : 1));
    report.choi_mode_used = "sampled";
  } else {
    report.choi_mode_used = "off";
  }

  std::vector<double> choi_eigs(choi_indices.size());
  std::vector<double> choi_slacks(choi_indices.size());
  if (!choi_indices.empty()) {
    const auto v = compute_V(spec, grid);
    report.choi.verdict = "pass";
    for (std::size_t i = 0; i < choi_indices.size(); ++i) {
      const std::size_t j = choi_indices[i];
      const Eigen::MatrixXcd choi = choi_matrix(v.maps[j], d);
      choi_eigs[i] = min_eig(choi);
      choi_slacks[i] = psd_slack(choi, options.tol_psd_rel);
      report.choi_min_eigenvalues.push_back({grid.time(j), choi_eigs[i]});
      if (choi_eigs[i] < -choi_slacks[i] && report.choi.verdict == "pass") {
        report.choi.verdict = "fail";
        report.choi.earliest_violation_time = grid.time(j);
        if (j > 0 && i > 0 && choi_indices[i - 1] == j - 1) {
          report.choi.refined_time = refine_eigenvalue_crossing(
              choi_matrix(v.maps[j - 1], d), choi, grid.time(j - 1), grid.time(j),
              -choi_slacks[i]);
        } else {
          report.choi.refined_time = grid.time(j);
        }
      }
    }

    // Cross-implication checks. COND-1 up to t implies a positive Choi
    // matrix at t (sufficiency); on the diagonal semi-Markov class COND-2
    // and the Choi verdict must agree in both directions.
    const std::size_t cond1_end =
        cond1.first_violation_index ? *cond1.first_violation_index : grid.size();
    for (std::size_t i = 0; i < choi_indices.size(); ++i) {
      const std::size_t j = choi_indices[i];
      if (j >= cond1_end) break;
      if (choi_eigs[i] < -(choi_slacks[i] + options.solver_band)) {
        std::ostringstream os;
        os << "inconsistency: G(t) >= 0 up to t = " << grid.time(j)
           << " but the Choi matrix has eigenvalue " << choi_eigs[i]
           << " there; check grid resolution";
        report.warnings.push_back(os.str());
        break;
      }
    }
    if (cond2) {
      for (std::size_t i = 0; i < choi_indices.size(); ++i) {
        const std::size_t j = choi_indices[i];
        const double tilde = cond2->gtilde.min_eigenvalues[j];
        const double tilde_slack =
            psd_slack(cond2->gtilde.samples[j], options.tol_psd_rel) + options.solver_band;
        const double choi_band = choi_slacks[i] + options.solver_band;
        const bool tilde_pos = tilde > tilde_slack;
        const bool tilde_neg = tilde < -tilde_slack;
        const bool choi_pos = choi_eigs[i] > choi_band;
        const bool choi_neg = choi_eigs[i] < -choi_band;
        if ((tilde_pos && choi_neg) || (tilde_neg && choi_pos)) {
          std::ostringstream os;
          os << "inconsistency: cond2 and Choi verdicts disagree at t = " << grid.time(j)
             << " (min eigs " << tilde << " vs " << choi_eigs[i] << ")";
          report.warnings.push_back(os.str());
          break;
        }
      }
    }
  } else {
    report.choi.verdict = "off";
  }

  return report;
}

}  // namespace memkernel
