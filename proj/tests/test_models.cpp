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
#include <nlohmann/json.hpp>

#include "memkernel/certifier.hpp"
#include "memkernel/dynamical_map.hpp"
#include "memkernel/laplace.hpp"
#include "memkernel/models.hpp"
#include "memkernel/spec_io.hpp"
#include "oracles.hpp"

using namespace memkernel;

TEST_CASE("every preset validates") {
  TimeGrid grid(4e-4, 250);
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const auto model = make_preset(name);
    const auto result = validate_spec(model.spec, grid);
    CHECK(result.ok);
  }
  CHECK_THROWS_AS(make_preset("no-such-model"), std::invalid_argument);
}

TEST_CASE("oscillator loss functions are n kappa e^(-gamma tau)") {
  const auto model = oscillator(0.5, 3.0, 5);
  TimeGrid grid(0.01, 100);
  const auto result = validate_spec(model.spec, grid);
  REQUIRE(result.ok);
  for (int n = 0; n < 5; ++n)
    for (double tau : {0.0, 0.4, 1.0})
      CHECK(result.k[n](tau) == doctest::Approx(n * 0.5 * std::exp(-3.0 * tau)));
  CHECK_THROWS_AS(oscillator(-1.0, 1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(oscillator(1.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("oscillator survival matches the Laplace oracle") {
  // g_11 solves ghat = (s + gamma)/(s^2 + gamma s + kappa)
  const auto model = oscillator(1.0, 4.0, 2);
  TimeGrid grid(1e-3, 1000);
  const auto g = compute_G(model.spec, grid);
  const auto exact = laplace_rational_solve({{Cx{1.0, 0.0}, 4.0}}, grid.times());
  double err = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j)
    err = std::max(err, std::abs(g.samples[j](1, 1) - exact[j]));
  CHECK(err < 1e-6);
  CHECK(g.samples.back()(1, 1).real() == doctest::Approx(0.8222634239018095).epsilon(1e-5));
}

TEST_CASE("oscillator truncation is exact for states below the top level") {
  TimeGrid grid(2e-3, 500);
  Eigen::MatrixXcd rho3 = Eigen::MatrixXcd::Zero(3, 3);
  rho3(1, 1) = 1.0;
  Eigen::MatrixXcd rho4 = Eigen::MatrixXcd::Zero(4, 4);
  rho4(1, 1) = 1.0;
  const auto small = evolve_state(oscillator(1.0, 2.0, 3).spec, grid, rho3);
  const auto large = evolve_state(oscillator(1.0, 2.0, 4).spec, grid, rho4);
  double err = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const auto a = unstack_matrix(small[j]);
    const auto b = unstack_matrix(large[j]);
    err = std::max(err, (b.topLeftCorner(3, 3) - a).cwiseAbs().maxCoeff());
    err = std::max(err, b.row(3).cwiseAbs().maxCoeff());
  }
  CHECK(err < 1e-12);
}

TEST_CASE("transport loss term is proportional to the identity") {
  const auto model = transport(ScalarFn::exponential_sum({{2.0, 5.0}}), 5);
  TimeGrid grid(0.01, 100);
  const auto result = validate_spec(model.spec, grid);
  REQUIRE(result.ok);
  for (int n = 0; n < 5; ++n)
    for (double tau : {0.0, 0.3}) CHECK(result.k[n](tau) == doctest::Approx(2.0 * std::exp(-5.0 * tau)));
  CHECK_THROWS_AS(transport(ScalarFn::constant(1.0), 1), std::invalid_argument);
}

TEST_CASE("transport map commutes with the cyclic shift") {
  const auto model = make_preset("transport-ring4");
  TimeGrid grid(4e-3, 250);
  const auto v = compute_V(model.spec, grid);
  Eigen::MatrixXcd shift = Eigen::MatrixXcd::Zero(4, 4);
  for (int n = 0; n < 4; ++n) shift((n + 1) % 4, n) = 1.0;
  const Eigen::MatrixXcd shift_super = kronecker(shift.conjugate(), shift);
  double err = 0.0;
  for (const auto& m : v.maps)
    err = std::max(err, (m * shift_super - shift_super * m).cwiseAbs().maxCoeff());
  CHECK(err < 1e-9);
}

TEST_CASE("diagonal qsm reduces to the two-level atom") {
  Eigen::MatrixXd pi = Eigen::MatrixXd::Zero(2, 2);
  pi(1, 0) = 1.0;
  pi(1, 1) = 1.0;
  const ScalarFn k = ScalarFn::exponential_sum({{1.0, 4.0}});
  const auto ring = diagonal_qsm(pi, {k, ScalarFn::zero()}, {ScalarFn::zero(), ScalarFn::zero()});
  const auto atom = two_level(k, ScalarFn::zero());
  TimeGrid grid(1e-3, 500);
  const auto va = compute_V(atom.spec, grid);
  const auto vb = compute_V(ring.spec, grid);
  double err = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j)
    err = std::max(err, (va.maps[j] - vb.maps[j]).cwiseAbs().maxCoeff());
  CHECK(err < 1e-12);
}

TEST_CASE("diagonal qsm populations follow the transition probabilities") {
  const auto model = make_preset("ring3-critical");
  TimeGrid grid(2e-3, 500);
  const auto v = compute_V(model.spec, grid);
  const auto t = compute_T(model.spec, grid);
  double err = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    for (int m = 0; m < 3; ++m) {
      Eigen::MatrixXcd unit = Eigen::MatrixXcd::Zero(3, 3);
      unit(m, m) = 1.0;
      const auto rho = unstack_matrix(v.maps[j] * stack_matrix(unit));
      for (int n = 0; n < 3; ++n)
        err = std::max(err, std::abs(rho(n, n).real() - t.samples[j](n, m)));
    }
  }
  CHECK(err < 1e-9);
}

TEST_CASE("diagonal qsm coherences factorize through g_nm") {
  const auto model = make_preset("ring3-critical");
  TimeGrid grid(2e-3, 500);
  const auto v = compute_V(model.spec, grid);
  const auto g = compute_G(model.spec, grid);
  double err = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    for (int n = 0; n < 3; ++n) {
      for (int m = 0; m < 3; ++m) {
        if (n == m) continue;
        Eigen::MatrixXcd unit = Eigen::MatrixXcd::Zero(3, 3);
        unit(n, m) = 1.0;
        const auto out = unstack_matrix(v.maps[j] * stack_matrix(unit));
        err = std::max(err, std::abs(out(n, m) - g.samples[j](n, m)));
        // every other entry stays zero
        Eigen::MatrixXcd rest = out;
        rest(n, m) = 0.0;
        err = std::max(err, rest.cwiseAbs().maxCoeff());
      }
    }
  }
  CHECK(err < 1e-9);
}

TEST_CASE("descriptors round-trip through the spec file format") {
  for (const auto& name : {"twolevel-overdamped", "oscillator-critical", "transport-ring4",
                           "ring3-cp-holding"}) {
    CAPTURE(name);
    const auto model = make_preset(name);
    const auto j = spec_to_json(model.spec);
    const auto back = spec_from_json(j);
    CHECK(back.dimension == model.spec.dimension);
    REQUIRE(back.channels.size() == model.spec.channels.size());
    for (std::size_t c = 0; c < back.channels.size(); ++c) {
      CHECK((back.channels[c].matrix - model.spec.channels[c].matrix).cwiseAbs().maxCoeff() ==
            0.0);
      CHECK(back.channels[c].profile.structurally_equal(model.spec.channels[c].profile));
    }
    CHECK(back.classical.has_value() == model.spec.classical.has_value());

    TimeGrid grid(2e-3, 200);
    const auto ga = compute_G(model.spec, grid);
    const auto gb = compute_G(back, grid);
    for (std::size_t s = 0; s < grid.size(); ++s)
      CHECK((ga.samples[s] - gb.samples[s]).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("bad diagonal qsm inputs are rejected") {
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
  bad(0, 0) = 0.7;  // column does not sum to one
  bad(1, 1) = 1.0;
  CHECK_THROWS_AS(
      diagonal_qsm(bad, {ScalarFn::constant(1.0), ScalarFn::zero()},
                   {ScalarFn::zero(), ScalarFn::zero()}),
      std::invalid_argument);
}
