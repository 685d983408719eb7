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

#include "memkernel/laplace.hpp"
#include "oracles.hpp"

using namespace memkernel;

namespace {

std::vector<double> linspace(double t_max, std::size_t count) {
  std::vector<double> t(count);
  for (std::size_t i = 0; i < count; ++i)
    t[i] = t_max * static_cast<double>(i) / static_cast<double>(count - 1);
  return t;
}

}  // namespace

TEST_CASE("simple real poles reproduce the overdamped closed form") {
  const auto t = linspace(5.0, 101);
  const auto g = laplace_rational_solve({{Cx{1.0, 0.0}, 4.0}}, t);
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(std::abs(g[i].real() - oracles::g_closed(1.0, 4.0, t[i])) < 1e-12);
    CHECK(std::abs(g[i].imag()) < 1e-12);
  }
  CHECK(g[20].real() == doctest::Approx(0.8222634239018095).epsilon(1e-12));  // t = 1
}

TEST_CASE("double pole takes the confluent branch") {
  // gamma^2 = 4a: ghat = (s+2)/(s+1)^2, g(t) = (1+t) e^(-t)
  const auto t = linspace(4.0, 81);
  const auto g = laplace_rational_solve({{Cx{1.0, 0.0}, 2.0}}, t);
  for (std::size_t i = 0; i < t.size(); ++i)
    CHECK(std::abs(g[i].real() - (1.0 + t[i]) * std::exp(-t[i])) < 1e-10);
  CHECK(g[20].real() == doctest::Approx(2.0 / M_E).epsilon(1e-10));  // t = 1
}

TEST_CASE("empty kernel gives the constant solution") {
  const auto g = laplace_rational_solve({}, {0.0, 0.7, 3.0});
  for (const auto& v : g) CHECK(std::abs(v - Cx{1.0, 0.0}) < 1e-14);
}

TEST_CASE("underdamped poles oscillate and cross zero where the oracle says") {
  const double a = 1.0, gamma = 1.0;
  const double t_zero = oracles::g_first_zero(a, gamma);  // 4 pi / (3 sqrt 3)
  const auto g = laplace_rational_solve({{Cx{a, 0.0}, gamma}}, {t_zero});
  CHECK(std::abs(g[0].real()) < 1e-12);
  CHECK(t_zero == doctest::Approx(2.4183991523122905).epsilon(1e-12));
}

TEST_CASE("complex-amplitude kernels match the quadrature solver") {
  // z = 0.5 k + i eps with k = e^(-3 tau), eps = 0.25: coherence-type kernel
  const std::vector<CxExpTerm> terms{{Cx{0.5, 0.0}, 3.0}, {Cx{0.0, 0.25}, 0.0}};
  TimeGrid grid(1e-3, 2000);
  ScalarKernel kernel;
  kernel.samples.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double tau = grid.time(j);
    kernel.samples[j] = Cx{0.5 * std::exp(-3.0 * tau), 0.25};
  }
  kernel.modes = terms;
  const auto quad = solve_scalar(kernel, grid);
  const auto exact = laplace_rational_solve(terms, grid.times());
  double err = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) err = std::max(err, std::abs(quad[j] - exact[j]));
  CHECK(err < 5e-7);
}

TEST_CASE("quadrature error shrinks at second order against the exact inversion") {
  const std::vector<CxExpTerm> terms{{Cx{2.0, 0.0}, 5.0}};
  auto max_err = [&](const TimeGrid& grid) {
    ScalarKernel kernel;
    kernel.samples.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
      kernel.samples[j] = Cx{2.0 * std::exp(-5.0 * grid.time(j)), 0.0};
    kernel.modes = terms;
    const auto quad = solve_scalar(kernel, grid);
    const auto exact = laplace_rational_solve(terms, grid.times());
    double err = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j)
      err = std::max(err, std::abs(quad[j] - exact[j]));
    return err;
  };
  TimeGrid coarse(4e-3, 500);
  const double ratio = max_err(coarse) / max_err(coarse.halved());
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("invert_rational rejects non-proper transforms") {
  RationalFunction f;
  f.num = {Cx{1.0, 0.0}, Cx{1.0, 0.0}};
  f.den = {Cx{1.0, 0.0}, Cx{1.0, 0.0}};
  CHECK_THROWS_AS(invert_rational(f), std::invalid_argument);
}

TEST_CASE("invert_rational handles a generic two-mode transform") {
  // 1/((s+1)(s+3)) = (e^-t - e^-3t)/2
  RationalFunction f;
  f.num = {Cx{1.0, 0.0}};
  f.den = {Cx{3.0, 0.0}, Cx{4.0, 0.0}, Cx{1.0, 0.0}};
  const auto modes = invert_rational(f);
  REQUIRE(modes.size() == 2);
  for (double t : {0.0, 0.5, 1.5, 4.0}) {
    const double expected = 0.5 * (std::exp(-t) - std::exp(-3.0 * t));
    CHECK(std::abs(eval_modes(modes, t) - Cx{expected, 0.0}) < 1e-13);
  }
}
