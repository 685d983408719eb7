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

// Command-line front end: spec ingestion, evolve / certify / sample /
// compare workflows and deterministic serialization of the results.
//
// Exit codes: 0 success (certify: all applicable verdicts pass), 1 certify
// found a failing verdict (report still written), 2 invalid spec or missing
// classical layer, 3 grid-guard failure.

#include <CLI11.hpp>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "memkernel/certifier.hpp"
#include "memkernel/models.hpp"
#include "memkernel/spec_io.hpp"

namespace mk = memkernel;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerdictFail = 1;
constexpr int kExitInvalidSpec = 2;
constexpr int kExitGridGuard = 3;

/// Shortest round-trip decimal representation, for diff-able CSV output.
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct CommonArgs {
  std::string spec_path;
  std::string preset;
  double h = 1e-3;
  std::size_t steps = 2000;
  std::string out_dir = ".";
  double tol_psd = mk::kPsdSlackRel;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_tol = true) {
  auto* spec_opt = cmd->add_option("--spec", args.spec_path, "Path to a kernel spec file (JSON)");
  auto* preset_opt =
      cmd->add_option("--preset", args.preset, "Name of a built-in model preset (see `zoo`)");
  preset_opt->excludes(spec_opt);
  cmd->add_option("--h", args.h, "Grid step")->check(CLI::PositiveNumber);
  cmd->add_option("--steps", args.steps, "Number of grid steps")->check(CLI::PositiveNumber);
  cmd->add_option("--out", args.out_dir, "Output directory");
  if (with_tol)
    cmd->add_option("--tol-psd", args.tol_psd,
                    "Relative slack for positive-semidefiniteness verdicts");
}

mk::KernelSpec resolve_spec(const CommonArgs& args) {
  if (!args.preset.empty()) return mk::make_preset(args.preset).spec;
  if (args.spec_path.empty())
    throw std::runtime_error("either --spec or --preset is required");
  return mk::load_spec(args.spec_path);
}

/// RunConfig invariant: h times the largest kernel magnitude must stay
/// within the solver guard before anything is launched.
bool grid_guard_ok(const mk::KernelSpec& spec, const mk::TimeGrid& grid) {
  const auto kernel = mk::structured_superkernel(spec, grid);
  return grid.step() * kernel.max_inf_norm_bound() <= 0.1 * (1.0 + 1e-12);
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  return out;
}

Eigen::MatrixXcd parse_initial_state(const std::string& text, int dim) {
  if (!text.empty() && text[0] == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw std::runtime_error("cannot open initial-state file " + text.substr(1));
    mk::OrderedJson j;
    in >> j;
    Eigen::MatrixXcd rho(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c)
        rho(r, c) = mk::Cx{j.at(r).at(c).at(0).get<double>(), j.at(r).at(c).at(1).get<double>()};
    return rho;
  }
  const int level = std::stoi(text);
  if (level < 0 || level >= dim)
    throw std::runtime_error("initial basis state out of range for dimension " +
                             std::to_string(dim));
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  rho(level, level) = 1.0;
  return rho;
}

int cmd_evolve(const CommonArgs& args, const std::string& initial) {
  const auto spec = resolve_spec(args);
  mk::TimeGrid grid(args.h, args.steps);
  const auto validation = mk::validate_spec(spec, grid);
  if (!validation.ok) {
    std::cerr << "spec validation failed: " << validation.message << "\n";
    return kExitInvalidSpec;
  }
  if (!grid_guard_ok(spec, grid)) {
    std::cerr << "grid guard failed: refine --h for this kernel\n";
    return kExitGridGuard;
  }

  Eigen::MatrixXcd rho0 = parse_initial_state(initial, spec.dimension);
  if (!mk::is_density_matrix(rho0)) {
    std::cerr << "initial state is not a density matrix\n";
    return kExitInvalidSpec;
  }
  const auto traj = mk::evolve_state(spec, grid, rho0);

  auto csv = open_output(args.out_dir, "evolution.csv");
  const int d = spec.dimension;
  csv << "t";
  for (int n = 0; n < d; ++n) csv << ",P_" << n;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) csv << ",rho_" << i << j << "_re,rho_" << i << j << "_im";
  csv << ",trace,min_eig_rho\n";
  for (std::size_t s = 0; s < traj.size(); ++s) {
    const Eigen::MatrixXcd rho = mk::unstack_matrix(traj[s]);
    csv << fmt(grid.time(s));
    for (int n = 0; n < d; ++n) csv << "," << fmt(rho(n, n).real());
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        csv << "," << fmt(rho(i, j).real()) << "," << fmt(rho(i, j).imag());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()),
                                                       Eigen::EigenvaluesOnly);
    csv << "," << fmt(rho.trace().real()) << "," << fmt(es.eigenvalues().minCoeff()) << "\n";
  }
  return kExitOk;
}

int cmd_certify(const CommonArgs& args, const std::string& choi_mode) {
  const auto spec = resolve_spec(args);
  mk::TimeGrid grid(args.h, args.steps);
  const auto validation = mk::validate_spec(spec, grid);
  if (!validation.ok) {
    std::cerr << "spec validation failed: " << validation.message << "\n";
    return kExitInvalidSpec;
  }
  if (!grid_guard_ok(spec, grid)) {
    std::cerr << "grid guard failed: refine --h for this kernel\n";
    return kExitGridGuard;
  }

  mk::CertifyOptions options;
  options.tol_psd_rel = args.tol_psd;
  if (choi_mode == "full")
    options.choi_mode = mk::ChoiMode::Full;
  else if (choi_mode == "sampled")
    options.choi_mode = mk::ChoiMode::Sampled;
  else if (choi_mode == "off")
    options.choi_mode = mk::ChoiMode::Off;

  const auto report = mk::certify(spec, grid, options);

  {
    auto out = open_output(args.out_dir, "report.json");
    out << mk::report_to_json(report).dump(2) << "\n";
  }
  {
    auto csv = open_output(args.out_dir, "cond1_eigs.csv");
    csv << "t,min_eig_G\n";
    for (std::size_t j = 0; j < report.g_min_eigenvalues.size(); ++j)
      csv << fmt(grid.time(j)) << "," << fmt(report.g_min_eigenvalues[j]) << "\n";
  }
  if (!report.gtilde_min_eigenvalues.empty()) {
    auto csv = open_output(args.out_dir, "cond2_eigs.csv");
    csv << "t,min_eig_Gtilde\n";
    for (std::size_t j = 0; j < report.gtilde_min_eigenvalues.size(); ++j)
      csv << fmt(grid.time(j)) << "," << fmt(report.gtilde_min_eigenvalues[j]) << "\n";
  }
  if (!report.choi_min_eigenvalues.empty()) {
    auto csv = open_output(args.out_dir, "choi_eigs.csv");
    csv << "t,min_eig_choi\n";
    for (const auto& [t, e] : report.choi_min_eigenvalues)
      csv << fmt(t) << "," << fmt(e) << "\n";
  }

  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "classical_valid=" << report.classical_valid.verdict
            << " cond1=" << report.cond1.verdict << " cond2=" << report.cond2.verdict
            << " choi=" << report.choi.verdict << "\n";
  return report.all_applicable_pass() ? kExitOk : kExitVerdictFail;
}

struct SampleArgs {
  std::size_t trajectories = 10000;
  std::uint64_t seed = 1;
  int initial_site = 0;
};

/// Shared setup for sample/compare: waiting-time tables from the classical
/// annotation, rejecting specs without one or with invalid densities.
int classical_setup(const mk::KernelSpec& spec, const mk::TimeGrid& grid,
                    std::vector<mk::WaitingTimeTable>& tables) {
  if (!spec.classical) {
    std::cerr << "spec carries no classical (pi, k) annotation\n";
    return kExitInvalidSpec;
  }
  for (std::size_t n = 0; n < spec.classical->k.size(); ++n) {
    tables.push_back(mk::waiting_time_table(spec.classical->k[n], grid));
    if (!tables.back().classically_valid) {
      std::cerr << "site " << n << " is classically invalid: density negative from t = "
                << fmt(*tables.back().first_invalid_time) << "\n";
      return kExitInvalidSpec;
    }
  }
  return kExitOk;
}

int cmd_sample(const CommonArgs& args, const SampleArgs& sargs) {
  const auto spec = resolve_spec(args);
  mk::TimeGrid grid(args.h, args.steps);
  const auto validation = mk::validate_spec(spec, grid);
  if (!validation.ok) {
    std::cerr << "spec validation failed: " << validation.message << "\n";
    return kExitInvalidSpec;
  }
  if (!grid_guard_ok(spec, grid)) {
    std::cerr << "grid guard failed: refine --h for this kernel\n";
    return kExitGridGuard;
  }
  std::vector<mk::WaitingTimeTable> tables;
  if (int rc = classical_setup(spec, grid, tables); rc != kExitOk) return rc;

  const auto ensemble = mk::simulate_ensemble(spec.classical->pi, tables, sargs.initial_site,
                                              grid.horizon(), sargs.trajectories, sargs.seed);
  const auto est = mk::estimate_populations(ensemble, spec.dimension, grid);

  {
    auto csv = open_output(args.out_dir, "trajectories.csv");
    csv << "trajectory,t,from,to\n";
    for (std::size_t i = 0; i < ensemble.size(); ++i)
      for (const auto& ev : ensemble[i].events)
        csv << i << "," << fmt(ev.time) << "," << ev.from << "," << ev.to << "\n";
  }
  {
    auto csv = open_output(args.out_dir, "populations.csv");
    csv << "t";
    for (int n = 0; n < spec.dimension; ++n) csv << ",P_" << n << ",se_" << n;
    csv << "\n";
    for (std::size_t j = 0; j < grid.size(); ++j) {
      csv << fmt(grid.time(j));
      for (int n = 0; n < spec.dimension; ++n)
        csv << "," << fmt(est.p_hat(n, Eigen::Index(j))) << ","
            << fmt(est.std_err(n, Eigen::Index(j)));
      csv << "\n";
    }
  }
  return kExitOk;
}

int cmd_compare(const CommonArgs& args, const SampleArgs& sargs) {
  const auto spec = resolve_spec(args);
  mk::TimeGrid grid(args.h, args.steps);
  const auto validation = mk::validate_spec(spec, grid);
  if (!validation.ok) {
    std::cerr << "spec validation failed: " << validation.message << "\n";
    return kExitInvalidSpec;
  }
  if (!grid_guard_ok(spec, grid)) {
    std::cerr << "grid guard failed: refine --h for this kernel\n";
    return kExitGridGuard;
  }
  std::vector<mk::WaitingTimeTable> tables;
  if (int rc = classical_setup(spec, grid, tables); rc != kExitOk) return rc;

  const auto ensemble = mk::simulate_ensemble(spec.classical->pi, tables, sargs.initial_site,
                                              grid.horizon(), sargs.trajectories, sargs.seed);
  const auto est = mk::estimate_populations(ensemble, spec.dimension, grid);
  Eigen::VectorXd p0 = Eigen::VectorXd::Zero(spec.dimension);
  p0(sargs.initial_site) = 1.0;
  const auto ref = mk::solve_gme(*spec.classical, p0, grid);

  const double n_traj = static_cast<double>(sargs.trajectories);
  double max_z = 0.0;
  std::size_t within = 0, total = 0;
  auto csv = open_output(args.out_dir, "compare.csv");
  csv << "t";
  for (int n = 0; n < spec.dimension; ++n) csv << ",P_mc_" << n << ",P_gme_" << n << ",se_" << n;
  csv << "\n";
  for (std::size_t j = 0; j < grid.size(); ++j) {
    csv << fmt(grid.time(j));
    for (int n = 0; n < spec.dimension; ++n) {
      const double p = ref(n, Eigen::Index(j));
      const double se = std::max({est.std_err(n, Eigen::Index(j)),
                                  std::sqrt(std::max(0.0, p * (1.0 - p)) / n_traj),
                                  1.0 / n_traj});
      const double z = std::abs(est.p_hat(n, Eigen::Index(j)) - p) / se;
      max_z = std::max(max_z, z);
      ++total;
      if (z <= 3.0) ++within;
      csv << "," << fmt(est.p_hat(n, Eigen::Index(j))) << "," << fmt(p) << "," << fmt(se);
    }
    csv << "\n";
  }

  mk::OrderedJson summary;
  summary["trajectories"] = sargs.trajectories;
  summary["seed"] = sargs.seed;
  summary["max_deviation_se"] = max_z;
  summary["within_3se_fraction"] = static_cast<double>(within) / static_cast<double>(total);
  auto out = open_output(args.out_dir, "compare.json");
  out << summary.dump(2) << "\n";
  std::cout << "max deviation = " << fmt(max_z) << " standard errors; within 3 se at "
            << fmt(100.0 * static_cast<double>(within) / static_cast<double>(total))
            << "% of grid points\n";
  return kExitOk;
}

int cmd_zoo(const std::string& out_dir) {
  for (const auto& name : mk::preset_names()) {
    const auto model = mk::make_preset(name);
    std::cout << name << "  (d = " << model.spec.dimension << ")\n";
    if (!out_dir.empty()) {
      fs::create_directories(out_dir);
      mk::save_spec(model.spec, (fs::path(out_dir) / (name + ".json")).string());
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"memory-kernel master equations: evolution, CP certification, sampling"};
  app.require_subcommand(1);

  CommonArgs evolve_args, certify_args, sample_args_c, compare_args_c;
  std::string initial = "0";
  std::string choi_mode = "auto";
  SampleArgs sample_args, compare_args;
  std::string zoo_out;

  auto* evolve = app.add_subcommand("evolve", "Solve the master equation for one initial state");
  add_common(evolve, evolve_args, false);
  evolve->add_option("--initial", initial,
                     "Initial state: basis level index, or @file.json with a [re,im] matrix");

  auto* certify = app.add_subcommand("certify", "Run the complete-positivity certification");
  add_common(certify, certify_args);
  certify->add_option("--choi", choi_mode, "Choi oracle mode")
      ->check(CLI::IsMember({"auto", "full", "sampled", "off"}));

  auto* sample = app.add_subcommand("sample", "Simulate semi-Markov trajectories");
  add_common(sample, sample_args_c, false);
  sample->add_option("--trajectories", sample_args.trajectories, "Ensemble size");
  sample->add_option("--seed", sample_args.seed, "Master seed");
  sample->add_option("--initial-site", sample_args.initial_site, "Start site");

  auto* compare =
      app.add_subcommand("compare", "Monte Carlo populations against the master equation");
  add_common(compare, compare_args_c, false);
  compare->add_option("--trajectories", compare_args.trajectories, "Ensemble size");
  compare->add_option("--seed", compare_args.seed, "Master seed");
  compare->add_option("--initial-site", compare_args.initial_site, "Start site");

  auto* zoo = app.add_subcommand("zoo", "List built-in presets; optionally export spec files");
  zoo->add_option("--out", zoo_out, "Directory for exported spec files");

  CLI11_PARSE(app, argc, argv);

  try {
    if (evolve->parsed()) return cmd_evolve(evolve_args, initial);
    if (certify->parsed()) return cmd_certify(certify_args, choi_mode);
    if (sample->parsed()) return cmd_sample(sample_args_c, sample_args);
    if (compare->parsed()) return cmd_compare(compare_args_c, compare_args);
    if (zoo->parsed()) return cmd_zoo(zoo_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    const std::string what = e.what();
    if (what.find("step guard") != std::string::npos) return kExitGridGuard;
    return kExitInvalidSpec;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidSpec;
  }
  return kExitOk;
}
