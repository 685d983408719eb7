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

#include "memkernel/models.hpp"

#include <cmath>
#include <stdexcept>

namespace memkernel {

namespace {

ScalarFn exp_profile(double amplitude, double rate) {
  return ScalarFn::exponential_sum({{amplitude, rate}});
}

std::vector<std::string> default_labels(int d) {
  std::vector<std::string> labels(d);
  for (int n = 0; n < d; ++n) labels[n] = std::to_string(n);
  return labels;
}

}  // namespace

ModelDescriptor two_level(const ScalarFn& k, const ScalarFn& eps) {
  KernelSpec spec;
  spec.dimension = 2;
  spec.basis_labels = {"+", "-"};
  spec.epsilon = {eps, ScalarFn::zero()};
  Eigen::MatrixXcd sigma_minus = Eigen::MatrixXcd::Zero(2, 2);
  sigma_minus(1, 0) = Cx{1.0, 0.0};  // lowers the excited state (index 0)
  spec.channels.push_back({sigma_minus, k});

  ClassicalAnnotation classical;
  classical.pi = Eigen::MatrixXd::Zero(2, 2);
  classical.pi(1, 0) = 1.0;  // + jumps to -
  classical.pi(1, 1) = 1.0;  // - is absorbing (its rate is zero)
  classical.k = {k, ScalarFn::zero()};
  spec.classical = classical;

  ModelDescriptor model{"two-level", std::move(spec), {}};
  return model;
}

ModelDescriptor oscillator(double kappa, double gamma, int truncation) {
  if (!(kappa > 0.0) || !(gamma > 0.0))
    throw std::invalid_argument("oscillator: kappa and gamma must be positive");
  if (truncation < 2) throw std::invalid_argument("oscillator: need at least two levels");

  KernelSpec spec;
  spec.dimension = truncation;
  spec.basis_labels = default_labels(truncation);
  spec.epsilon.assign(truncation, ScalarFn::zero());
  Eigen::MatrixXcd lowering = Eigen::MatrixXcd::Zero(truncation, truncation);
  for (int n = 1; n < truncation; ++n)
    lowering(n - 1, n) = Cx{std::sqrt(static_cast<double>(n)), 0.0};
  spec.channels.push_back({lowering, exp_profile(kappa, gamma)});

  ModelDescriptor model{"oscillator", std::move(spec), {}};
  model.parameters = {{"kappa", kappa}, {"gamma", gamma}, {"truncation", double(truncation)}};
  return model;
}

ModelDescriptor transport(const ScalarFn& k, int sites) {
  if (sites < 2) throw std::invalid_argument("transport: need at least two sites");

  KernelSpec spec;
  spec.dimension = sites;
  spec.basis_labels = default_labels(sites);
  spec.epsilon.assign(sites, ScalarFn::zero());
  Eigen::MatrixXcd shift = Eigen::MatrixXcd::Zero(sites, sites);
  for (int n = 0; n < sites; ++n) shift((n + 1) % sites, n) = Cx{1.0, 0.0};
  const ScalarFn half = k.scaled(0.5);
  spec.channels.push_back({shift, half});
  spec.channels.push_back({shift.adjoint(), half});

  // Populations hop symmetrically to the two neighbours with the full rate k.
  ClassicalAnnotation classical;
  classical.pi = Eigen::MatrixXd::Zero(sites, sites);
  for (int n = 0; n < sites; ++n) {
    classical.pi((n + 1) % sites, n) += 0.5;
    classical.pi((n + sites - 1) % sites, n) += 0.5;
  }
  classical.k.assign(sites, k);
  spec.classical = classical;

  ModelDescriptor model{"transport", std::move(spec), {}};
  model.parameters = {{"sites", double(sites)}};
  return model;
}

ModelDescriptor diagonal_qsm(const Eigen::MatrixXd& pi, std::vector<ScalarFn> k,
                             std::vector<ScalarFn> eps) {
  const int d = static_cast<int>(pi.rows());
  if (pi.cols() != d || d < 2) throw std::invalid_argument("diagonal_qsm: pi must be square, d >= 2");
  if (static_cast<int>(k.size()) != d || static_cast<int>(eps.size()) != d)
    throw std::invalid_argument("diagonal_qsm: need one rate and one energy per site");
  for (int m = 0; m < d; ++m) {
    double colsum = 0.0;
    for (int n = 0; n < d; ++n) {
      if (pi(n, m) < 0.0) throw std::invalid_argument("diagonal_qsm: pi entries must be >= 0");
      colsum += pi(n, m);
    }
    if (std::abs(colsum - 1.0) > 1e-10)
      throw std::invalid_argument("diagonal_qsm: pi columns must sum to 1");
  }

  KernelSpec spec;
  spec.dimension = d;
  spec.basis_labels = default_labels(d);
  spec.epsilon = std::move(eps);
  for (int m = 0; m < d; ++m) {
    if (k[m].is_zero()) continue;
    for (int n = 0; n < d; ++n) {
      if (pi(n, m) == 0.0) continue;
      Eigen::MatrixXcd unit = Eigen::MatrixXcd::Zero(d, d);
      unit(n, m) = Cx{std::sqrt(pi(n, m)), 0.0};
      spec.channels.push_back({unit, k[m]});
    }
  }
  spec.classical = ClassicalAnnotation{pi, k};

  ModelDescriptor model{"diagonal-qsm", std::move(spec), {}};
  return model;
}

namespace {

Eigen::MatrixXd ring_hop_matrix(int sites) {
  Eigen::MatrixXd pi = Eigen::MatrixXd::Zero(sites, sites);
  for (int n = 0; n < sites; ++n) {
    pi((n + 1) % sites, n) += 0.5;
    pi((n + sites - 1) % sites, n) += 0.5;
  }
  return pi;
}

ModelDescriptor ring_qsm(const std::string& name, int sites, double a, double gamma) {
  auto model = diagonal_qsm(ring_hop_matrix(sites),
                            std::vector<ScalarFn>(sites, exp_profile(a, gamma)),
                            std::vector<ScalarFn>(sites, ScalarFn::zero()));
  model.name = name;
  model.parameters = {{"sites", double(sites)}, {"a", a}, {"gamma", gamma}};
  return model;
}

ModelDescriptor named_two_level(const std::string& name, double a, double gamma) {
  auto model = two_level(exp_profile(a, gamma), ScalarFn::zero());
  model.name = name;
  model.parameters = {{"a", a}, {"gamma", gamma}};
  return model;
}

ModelDescriptor named_transport(const std::string& name, int sites, double a, double gamma) {
  auto model = transport(exp_profile(a, gamma), sites);
  model.name = name;
  model.parameters = {{"sites", double(sites)}, {"a", a}, {"gamma", gamma}};
  return model;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {
      "twolevel-overdamped",  "twolevel-critical",      "twolevel-underdamped",
      "twolevel-markov",      "oscillator-overdamped",  "oscillator-critical",
      "oscillator-violating", "transport-ring4",        "transport-ring4-critical",
      "transport-ring4-violating", "ring3-cp-holding",  "ring3-critical",
      "ring3-cp-violating",
  };
}

ModelDescriptor make_preset(const std::string& name) {
  // Exponential kernels a e^(-gamma tau): gamma^2 >= 4a keeps the survival
  // probabilities positive; the Markov point uses a = kappa gamma with large
  // gamma.
  if (name == "twolevel-overdamped") return named_two_level(name, 1.0, 4.0);
  if (name == "twolevel-critical") return named_two_level(name, 1.0, 2.0);
  if (name == "twolevel-underdamped") return named_two_level(name, 1.0, 1.0);
  if (name == "twolevel-markov") return named_two_level(name, 100.0, 100.0);
  if (name == "oscillator-overdamped") {
    auto m = oscillator(1.0, 4.0, 4);
    m.name = name;
    return m;
  }
  if (name == "oscillator-critical") {
    auto m = oscillator(1.0, 2.0, 2);
    m.name = name;
    return m;
  }
  if (name == "oscillator-violating") {
    auto m = oscillator(1.0, 1.0, 4);
    m.name = name;
    return m;
  }
  if (name == "transport-ring4") return named_transport(name, 4, 1.0, 4.0);
  if (name == "transport-ring4-critical") return named_transport(name, 4, 4.0, 4.0);
  if (name == "transport-ring4-violating") return named_transport(name, 4, 1.0, 1.0);
  if (name == "ring3-cp-holding") return ring_qsm(name, 3, 0.25, 2.0);
  if (name == "ring3-critical") return ring_qsm(name, 3, 1.0, 2.0);
  if (name == "ring3-cp-violating") return ring_qsm(name, 3, 1.0, 0.5);
  throw std::invalid_argument("unknown preset: " + name);
}

}  // namespace memkernel
