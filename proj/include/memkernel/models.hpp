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

#include <map>
#include <string>
#include <vector>

#include "memkernel/kernel_spec.hpp"

namespace memkernel {

/// Ready-made kernel together with the parameters that built it.
struct ModelDescriptor {
  std::string name;
  KernelSpec spec;
  std::map<std::string, double> parameters;
};

/// Two-level atom with decay channel sqrt(k(tau)) sigma_minus and level
/// splitting eps(tau) on the excited state. Basis order: index 0 = excited
/// (+), index 1 = ground (-); the loss functions come out as k_+ = k,
/// k_- = 0.
ModelDescriptor two_level(const ScalarFn& k, const ScalarFn& eps);

/// Damped harmonic oscillator truncated to `truncation` number states with
/// channel sqrt(kappa e^(-gamma tau)) a. Exact for initial states supported
/// below the truncation because the channel only lowers the excitation
/// number; k_n = n kappa e^(-gamma tau).
ModelDescriptor oscillator(double kappa, double gamma, int truncation);

/// Excitation transport on a ring of `sites` subunits: channels
/// sqrt(k/2) T and sqrt(k/2) T^dag with T the cyclic shift. The periodic
/// boundary keeps T unitary, so the loss term is k(tau) times the identity.
ModelDescriptor transport(const ScalarFn& k, int sites);

/// Diagonal semi-Markov kernel: one channel sqrt(pi(n,m) k_m(tau)) |n><m|
/// per nonzero jump probability, diagonal Hamiltonian from eps.
ModelDescriptor diagonal_qsm(const Eigen::MatrixXd& pi, std::vector<ScalarFn> k,
                             std::vector<ScalarFn> eps);

/// Named parameter presets used by the command-line tool and the
/// verification suites. Each model ships a CP-safe, a threshold and a
/// violating parameter point.
std::vector<std::string> preset_names();
ModelDescriptor make_preset(const std::string& name);

}  // namespace memkernel
