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

#include "memkernel/laplace.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace memkernel {

namespace {

std::vector<Cx> trimmed(std::vector<Cx> p) {
  while (p.size() > 1 && std::abs(p.back()) == 0.0) p.pop_back();
  return p;
}

/// Taylor coefficients of p around s0 (ascending in u = s - s0), by repeated
/// synthetic division by (s - s0).
std::vector<Cx> taylor_shift(std::vector<Cx> p, Cx s0) {
  std::vector<Cx> out;
  out.reserve(p.size());
  while (!p.empty()) {
    if (p.size() == 1) {
      out.push_back(p[0]);
      break;
    }
    std::vector<Cx> quot(p.size() - 1);
    quot.back() = p.back();
    for (std::size_t i = p.size() - 2; i >= 1; --i) quot[i - 1] = p[i] + s0 * quot[i];
    out.push_back(p[0] + s0 * quot[0]);
    p = std::move(quot);
  }
  return out;
}

/// w = a / b mod u^count, requires b[0] != 0.
std::vector<Cx> series_divide(const std::vector<Cx>& a, const std::vector<Cx>& b,
                              std::size_t count) {
  std::vector<Cx> w(count, Cx{0.0, 0.0});
  auto coeff = [](const std::vector<Cx>& p, std::size_t i) {
    return i < p.size() ? p[i] : Cx{0.0, 0.0};
  };
  for (std::size_t k = 0; k < count; ++k) {
    Cx acc = coeff(a, k);
    for (std::size_t i = 1; i <= k; ++i) acc -= coeff(b, i) * w[k - i];
    w[k] = acc / b[0];
  }
  return w;
}

}  // namespace

std::vector<Cx> polynomial_multiply(const std::vector<Cx>& a, const std::vector<Cx>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Cx> out(a.size() + b.size() - 1, Cx{0.0, 0.0});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

Cx polynomial_eval(const std::vector<Cx>& p, Cx s) {
  Cx v{0.0, 0.0};
  for (std::size_t i = p.size(); i-- > 0;) v = v * s + p[i];
  return v;
}

std::vector<Cx> polynomial_roots(const std::vector<Cx>& p_in) {
  auto p = trimmed(p_in);
  const std::size_t deg = p.size() - 1;
  if (deg == 0) return {};
  if (deg == 1) return {-p[0] / p[1]};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
  for (std::size_t i = 0; i + 1 < deg; ++i) companion(i + 1, i) = Cx{1.0, 0.0};
  for (std::size_t i = 0; i < deg; ++i) companion(i, deg - 1) = -p[i] / p[deg];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw LaplaceError("polynomial_roots: companion eigensolver did not converge");
  std::vector<Cx> roots(deg);
  for (std::size_t i = 0; i < deg; ++i) roots[i] = es.eigenvalues()(static_cast<Eigen::Index>(i));
  return roots;
}

std::vector<ExpPolyMode> invert_rational(const RationalFunction& f, double cluster_tol) {
  const auto num = trimmed(f.num);
  const auto den = trimmed(f.den);
  if (den.size() < 2)
    throw std::invalid_argument("invert_rational: denominator must have positive degree");
  if (num.size() >= den.size())
    throw std::invalid_argument("invert_rational: transform must be strictly proper");

  auto roots = polynomial_roots(den);
  double scale = 1.0;
  for (const auto& r : roots) scale = std::max(scale, std::abs(r));

  // Greedy clustering of nearly equal roots.
  struct Cluster {
    Cx mean;
    std::size_t count;
  };
  std::vector<Cluster> clusters;
  std::sort(roots.begin(), roots.end(), [](const Cx& a, const Cx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  for (const auto& r : roots) {
    bool placed = false;
    for (auto& c : clusters) {
      if (std::abs(r - c.mean) <= cluster_tol * scale) {
        c.mean = (c.mean * static_cast<double>(c.count) + r) / static_cast<double>(c.count + 1);
        ++c.count;
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back({r, 1});
  }

  const Cx lead = den.back();
  std::vector<ExpPolyMode> modes;
  modes.reserve(clusters.size());
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const Cx pole = clusters[c].mean;
    const std::size_t mu = clusters[c].count;
    // R(s) = lead * prod_{c' != c} (s - pole_{c'})^{mu_{c'}}
    std::vector<Cx> rest{lead};
    for (std::size_t c2 = 0; c2 < clusters.size(); ++c2) {
      if (c2 == c) continue;
      for (std::size_t k = 0; k < clusters[c2].count; ++k)
        rest = polynomial_multiply(rest, {-clusters[c2].mean, Cx{1.0, 0.0}});
    }
    const auto num_taylor = taylor_shift(num, pole);
    const auto rest_taylor = taylor_shift(rest, pole);
    const auto w = series_divide(num_taylor, rest_taylor, mu);
    // num/den = ... + sum_{l=1}^{mu} w[mu-l] / (s-pole)^l, and
    // L^{-1}[1/(s-p)^l] = t^{l-1} e^{pt} / (l-1)!
    ExpPolyMode mode;
    mode.pole = pole;
    mode.poly.resize(mu);
    double factorial = 1.0;
    for (std::size_t l = 0; l < mu; ++l) {
      if (l > 0) factorial *= static_cast<double>(l);
      mode.poly[l] = w[mu - 1 - l] / factorial;
    }
    modes.push_back(std::move(mode));
  }
  return modes;
}

Cx eval_modes(const std::vector<ExpPolyMode>& modes, double t) {
  Cx v{0.0, 0.0};
  for (const auto& m : modes) {
    Cx poly{0.0, 0.0};
    for (std::size_t l = m.poly.size(); l-- > 0;) poly = poly * t + m.poly[l];
    v += poly * std::exp(m.pole * t);
  }
  return v;
}

RationalFunction g_equation_transform(const std::vector<CxExpTerm>& z_terms) {
  // zhat(s) = sum_j a_j / (s + gamma_j) = N_z / D_z with D_z = prod (s + gamma_j)
  std::vector<Cx> dz{Cx{1.0, 0.0}};
  for (const auto& t : z_terms) dz = polynomial_multiply(dz, {Cx{t.rate, 0.0}, Cx{1.0, 0.0}});
  std::vector<Cx> nz(std::max<std::size_t>(dz.size() - 1, 1), Cx{0.0, 0.0});
  for (std::size_t j = 0; j < z_terms.size(); ++j) {
    std::vector<Cx> part{z_terms[j].amplitude};
    for (std::size_t l = 0; l < z_terms.size(); ++l) {
      if (l == j) continue;
      part = polynomial_multiply(part, {Cx{z_terms[l].rate, 0.0}, Cx{1.0, 0.0}});
    }
    for (std::size_t i = 0; i < part.size(); ++i) nz[i] += part[i];
  }
  // ghat = 1/(s + N_z/D_z) = D_z / (s D_z + N_z)
  RationalFunction g;
  g.num = dz;
  std::vector<Cx> sdz(dz.size() + 1, Cx{0.0, 0.0});
  for (std::size_t i = 0; i < dz.size(); ++i) sdz[i + 1] = dz[i];
  for (std::size_t i = 0; i < nz.size(); ++i) sdz[i] += nz[i];
  g.den = sdz;
  return g;
}

std::vector<Cx> laplace_rational_solve(const std::vector<CxExpTerm>& z_terms,
                                       const std::vector<double>& t_points, double cluster_tol) {
  const auto modes = invert_rational(g_equation_transform(z_terms), cluster_tol);
  std::vector<Cx> out(t_points.size());
  for (std::size_t i = 0; i < t_points.size(); ++i) out[i] = eval_modes(modes, t_points[i]);
  return out;
}

}  // namespace memkernel
