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

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "memkernel/certifier.hpp"
#include "memkernel/kernel_spec.hpp"

namespace memkernel {

using OrderedJson = nlohmann::ordered_json;

/// Spec file layout (JSON): `dimension`, `basis_labels`, `epsilon` (one
/// scalar function per level), `channels` (row-major complex matrix with
/// [re, im] entries plus a scalar profile) and an optional `classical`
/// block (`pi` matrix, `k` list). Scalar functions are tagged objects:
///   {"type": "constant",        "value": c}
///   {"type": "exponential-sum", "terms": [{"amplitude": a, "rate": g}, ...]}
///   {"type": "tabulated",       "step": h, "samples": [...]}
OrderedJson scalar_fn_to_json(const ScalarFn& fn);
ScalarFn scalar_fn_from_json(const OrderedJson& j);

OrderedJson spec_to_json(const KernelSpec& spec);
KernelSpec spec_from_json(const OrderedJson& j);

void save_spec(const KernelSpec& spec, const std::string& path);
KernelSpec load_spec(const std::string& path);

/// Fixed-name report serialization: `classical_valid`, `cond1`, `cond2`,
/// `choi` (each {verdict, earliest_violation_time|null, refined_time|null}),
/// `survival`, `tolerances`, `grid`, `choi_mode`, `warnings`.
OrderedJson report_to_json(const CPReport& report);

}  // namespace memkernel
