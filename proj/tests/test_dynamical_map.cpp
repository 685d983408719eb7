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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "memkernel/dynamical_map.hpp"
#include "memkernel/models.hpp"
#include "oracles.hpp"

using namespace memkernel;

namespace {

const ScalarFn kExp14 = ScalarFn::exponential_sum({{1.0, 4.0}});

double sup_distance(const MapTrajectory& a, const MapTrajectory& b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.maps.size(); ++j)
    d = std::max(d, (a.maps[j] - b.maps[j]).cwiseAbs().maxCoeff());
  return d;
}

}  // namespace

TEST_CASE("zero kernel evolves to the identity map") {
  KernelSpec spec;
  spec.dimension = 2;
  spec.epsilon = {ScalarFn::zero(), ScalarFn::zero()};
  TimeGrid grid(0.01, 100);
  const auto v = compute_V(spec, grid);
  for (const auto& m : v.maps)
    CHECK((m - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("two-level map matches the scalar population and coherence factors") {
  const auto model = two_level(kExp14, ScalarFn::zero());
  TimeGrid grid(1e-3, 1000);
  const auto v = compute_V(model.spec, grid);
  const auto& v1 = v.maps.back();

  // population factor <+|V(E_++)|+> -> vec index 0, column 0
  CHECK(std::abs(v1(0, 0) - Cx{oracles::g_closed(1.0, 4.0, 1.0), 0.0}) < 1e-6);
  CHECK(v1(0, 0).real() == doctest::Approx(0.8222634239018095).epsilon(1e-5));
  // coherence factor: column of E_{+-} = |+><-| is vec index 1*2+0 = 2
  CHECK(std::abs(v1(2, 2) - Cx{oracles::g_closed(0.5, 4.0, 1.0), 0.0}) < 1e-6);
  CHECK(v1(2, 2).real() == doctest::Approx(0.9084430849114631).epsilon(1e-5));
  // ground-state column is preserved
  CHECK(std::abs(v1(3, 3) - Cx{1.0, 0.0}) < 1e-9);
}

TEST_CASE("Markov-limit population follows the semigroup decay") {
  const auto model = two_level(ScalarFn::exponential_sum({{100.0, 100.0}}), ScalarFn::zero());
  TimeGrid grid(5e-4, 6000);  // horizon 3
  Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(2, 2);
  rho0(0, 0) = 1.0;
  const auto traj = evolve_state(model.spec, grid, rho0);
  double max_dev = 0.0;
  for (std::size_t j = 0; j < traj.size(); ++j)
    max_dev = std::max(max_dev, std::abs(traj[j](0).real() - std::exp(-grid.time(j))));
  CHECK(max_dev < 0.02);
}

TEST_CASE("V0 of the zero kernel fixes every matrix entry") {
  KernelSpec spec;
  spec.dimension = 3;
  spec.epsilon = {ScalarFn::zero(), ScalarFn::zero(), ScalarFn::zero()};
  TimeGrid grid(0.02, 50);
  const auto v0 = compute_V0(spec, grid);
  for (const auto& m : v0.maps)
    CHECK((m - Eigen::MatrixXcd::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("V0 diagonal carries the decoherence functions with conjugate symmetry") {
  const auto model = two_level(kExp14, ScalarFn::constant(0.5));
  TimeGrid grid(1e-3, 1000);
  const auto v0 = compute_V0(model.spec, grid);
  const auto& m = v0.maps.back();
  CHECK(std::abs(m(0, 0).real() - oracles::g_closed(1.0, 4.0, 1.0)) < 1e-6);
  // g_{+-} and g_{-+} sit at vec indices 2 and 1 and are conjugates
  CHECK(std::abs(m(2, 2) - std::conj(m(1, 1))) < 1e-12);
  CHECK(std::abs(m(2, 2).imag()) > 1e-3);  // nonzero level splitting rotates the coherence
  CHECK(std::abs(m(3, 3) - Cx{1.0, 0.0}) < 1e-9);
}

TEST_CASE("V0 equals the direct solve when the cp part vanishes") {
  KernelSpec pure;
  pure.dimension = 2;
  pure.epsilon = {ScalarFn::constant(1.0), ScalarFn::zero()};
  TimeGrid grid(1e-3, 500);
  const auto vp = compute_V(pure, grid);
  const auto vp0 = compute_V0(pure, grid);
  CHECK(sup_distance(vp, vp0) < 1e-12);
}

TEST_CASE("Dyson order zero is V0 and a vanishing cp part terminates the series") {
  const auto model = two_level(kExp14, ScalarFn::zero());
  TimeGrid grid(2e-3, 250);
  const auto v0 = compute_V0(model.spec, grid);
  const auto d0 = dyson_series(model.spec, grid, 0);
  CHECK(sup_distance(v0, d0) == 0.0);

  KernelSpec pure;
  pure.dimension = 2;
  pure.epsilon = {ScalarFn::constant(0.7), ScalarFn::zero()};
  const auto d5 = dyson_series(pure, grid, 5);
  const auto p0 = compute_V0(pure, grid);
  CHECK(sup_distance(d5, p0) < 1e-12);
  CHECK(d5.dyson_order <= 1);  // first increment already vanishes
}

TEST_CASE("Dyson partial sums converge to the direct solve") {
  const auto model = two_level(kExp14, ScalarFn::zero());
  TimeGrid grid(1e-3, 1000);
  const auto v = compute_V(model.spec, grid);
  double prev = 1e300;
  bool reached = false;
  for (int order : {1, 3, 5, 8, 12}) {
    const auto d = dyson_series(model.spec, grid, order);
    const double dist = sup_distance(v, d);
    CHECK(dist < prev + 1e-12);
    prev = dist;
    if (dist < 1e-6) {
      reached = true;
      break;
    }
  }
  CHECK(reached);
}

TEST_CASE("apply_map returns the state for the identity map and validates input") {
  Eigen::MatrixXcd rho(2, 2);
  rho << 0.75, Cx{0.1, 0.2}, Cx{0.1, -0.2}, 0.25;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(4, 4);
  CHECK((apply_map(id, rho) - rho).cwiseAbs().maxCoeff() == 0.0);

  Eigen::MatrixXcd not_density(2, 2);
  not_density << 2.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(apply_map(id, not_density), std::invalid_argument);
}

TEST_CASE("oscillator positivity breaks exactly at the survival zero crossing") {
  // gamma = kappa = 1, started in |1><1|: the level population is the
  // survival probability, first zero at 4 pi / (3 sqrt 3)
  const auto model = oscillator(1.0, 1.0, 2);
  const double t_zero = oracles::g_first_zero(1.0, 1.0);
  TimeGrid grid(2e-3, 1500);  // horizon 3
  Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(2, 2);
  rho0(1, 1) = 1.0;
  const auto traj = evolve_state(model.spec, grid, rho0);

  std::size_t first_negative = grid.size();
  for (std::size_t j = 0; j < traj.size(); ++j) {
    const double p1 = traj[j](3).real();  // entry (1,1) is vec index 3
    if (p1 < -1e-9) {
      first_negative = j;
      break;
    }
  }
  REQUIRE(first_negative < grid.size());
  CHECK(std::abs(grid.time(first_negative) - t_zero) < 2.5 * grid.step());
}

TEST_CASE("identity map has a rank-one Choi matrix of trace d") {
  const auto s = choi_at(Eigen::MatrixXcd::Identity(4, 4), 2);
  CHECK(std::abs(s.choi.trace() - Cx{2.0, 0.0}) < 1e-14);
  CHECK(s.min_eigenvalue == doctest::Approx(0.0).epsilon(1e-14));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s.choi);
  CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(2.0));
  CHECK(s.hermiticity_defect < 1e-14);
}

TEST_CASE("Choi convention: a single Kraus map yields a positive rank-one Choi") {
  Eigen::MatrixXcd a(2, 2);
  a << Cx{0.2, 0.1}, Cx{0.0, 0.9}, Cx{0.5, 0.0}, Cx{-0.3, 0.4};
  const Eigen::MatrixXcd superop = kronecker(a.conjugate(), a);
  const auto s = choi_at(superop, 2);
  CHECK(s.min_eigenvalue > -1e-14);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s.choi);
  int positive = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 1e-12) ++positive;
  CHECK(positive == 1);
}

TEST_CASE("two-level map fails the Choi test where the G determinant is negative") {
  const auto model = two_level(kExp14, ScalarFn::zero());
  TimeGrid grid(2e-3, 500);
  const auto v = compute_V(model.spec, grid);
  const auto eigs = min_choi_eigenvalues(v);
  // at t = 1 the determinant g_++ - g_+-^2 = -0.003 and the map is not CP
  CHECK(eigs.back() < -1e-4);
  CHECK(eigs.front() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("trace and Hermiticity preservation hold at solver precision") {
  const auto model = oscillator(1.0, 2.0, 3);
  TimeGrid grid(2e-3, 500);
  const auto v = compute_V(model.spec, grid);
  CHECK(trace_preservation_defect(v) < 1e-10);
  CHECK(hermiticity_preservation_defect(v) < 1e-10);
}

TEST_CASE("semigroup defect shrinks toward the Markov limit") {
  const double t = 0.5, s = 0.7;
  double prev = 1e300;
  for (double gamma : {10.0, 100.0}) {
    const auto model =
        two_level(ScalarFn::exponential_sum({{gamma, gamma}}), ScalarFn::zero());
    const double h = 0.1 / (2.0 * gamma) / 2.0;
    const auto steps = static_cast<std::size_t>(std::llround((t + s) / h));
    TimeGrid grid(h, steps);
    const auto v = compute_V(model.spec, grid);
    const auto at = [&](double time) {
      return v.maps[static_cast<std::size_t>(std::llround(time / h))];
    };
    const double defect = (at(t + s) - at(t) * at(s)).norm();
    CHECK(defect < prev);
    prev = defect;
  }
}
