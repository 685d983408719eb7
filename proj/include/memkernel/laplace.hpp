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

#include <vector>

#include "memkernel/volterra.hpp"

namespace memkernel {

/// Rational function num(s)/den(s); coefficients ascending in s.
struct RationalFunction {
  std::vector<Cx> num;
  std::vector<Cx> den;
};

/// One inverse-Laplace mode P(t) * exp(pole * t); poly[l] multiplies t^l
/// (factorials already folded in).
struct ExpPolyMode {
  Cx pole;
  std::vector<Cx> poly;
};

/// Thrown when the companion-matrix root finder fails to converge; callers
/// fall back to quadrature.
struct LaplaceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<Cx> polynomial_multiply(const std::vector<Cx>& a, const std::vector<Cx>& b);
Cx polynomial_eval(const std::vector<Cx>& p, Cx s);

/// Denominator roots via companion-matrix eigenvalues.
std::vector<Cx> polynomial_roots(const std::vector<Cx>& p);

/// Partial-fraction inversion of a strictly proper rational Laplace
/// transform. Roots closer than cluster_tol (relative) merge into one
/// confluent polynomial-times-exponential mode, which avoids catastrophic
/// cancellation between residues of nearly equal poles.
std::vector<ExpPolyMode> invert_rational(const RationalFunction& f, double cluster_tol = 1e-8);

Cx eval_modes(const std::vector<ExpPolyMode>& modes, double t);

/// Laplace transform of the solution of g' = -(z * g), g(0) = 1, for an
/// exponential-sum kernel z: ghat(s) = 1 / (s + zhat(s)), assembled as a
/// rational function with D_z(s) = prod_j (s + gamma_j).
RationalFunction g_equation_transform(const std::vector<CxExpTerm>& z_terms);

/// Exact-to-rounding samples of g at the given times via root finding and
/// partial fractions.
std::vector<Cx> laplace_rational_solve(const std::vector<CxExpTerm>& z_terms,
                                       const std::vector<double>& t_points,
                                       double cluster_tol = 1e-8);

}  // namespace memkernel
