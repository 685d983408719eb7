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

#include "memkernel/spec_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace memkernel {

namespace {

OrderedJson complex_matrix_to_json(const Eigen::MatrixXcd& m) {
  OrderedJson rows = OrderedJson::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    OrderedJson row = OrderedJson::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(OrderedJson::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXcd complex_matrix_from_json(const OrderedJson& j) {
  if (!j.is_array() || j.empty()) throw std::runtime_error("matrix must be a nonempty array of rows");
  const auto rows = j.size();
  const auto cols = j.at(0).size();
  Eigen::MatrixXcd m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = j.at(r);
    if (row.size() != cols) throw std::runtime_error("matrix rows have inconsistent lengths");
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& entry = row.at(c);
      if (!entry.is_array() || entry.size() != 2)
        throw std::runtime_error("complex matrix entries must be [re, im] pairs");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          Cx{entry.at(0).get<double>(), entry.at(1).get<double>()};
    }
  }
  return m;
}

Eigen::MatrixXd real_matrix_from_json(const OrderedJson& j) {
  if (!j.is_array() || j.empty()) throw std::runtime_error("matrix must be a nonempty array of rows");
  const auto rows = j.size();
  const auto cols = j.at(0).size();
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (j.at(r).size() != cols) throw std::runtime_error("matrix rows have inconsistent lengths");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j.at(r).at(c).get<double>();
  }
  return m;
}

OrderedJson real_matrix_to_json(const Eigen::MatrixXd& m) {
  OrderedJson rows = OrderedJson::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    OrderedJson row = OrderedJson::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

OrderedJson verdict_to_json(const VerdictEntry& v) {
  OrderedJson j;
  j["verdict"] = v.verdict;
  j["earliest_violation_time"] =
      v.earliest_violation_time ? OrderedJson(*v.earliest_violation_time) : OrderedJson(nullptr);
  j["refined_time"] = v.refined_time ? OrderedJson(*v.refined_time) : OrderedJson(nullptr);
  return j;
}

}  // namespace

OrderedJson scalar_fn_to_json(const ScalarFn& fn) {
  OrderedJson j;
  switch (fn.kind()) {
    case ScalarFn::Kind::Constant:
      j["type"] = "constant";
      j["value"] = fn.constant_value();
      break;
    case ScalarFn::Kind::ExponentialSum: {
      j["type"] = "exponential-sum";
      OrderedJson terms = OrderedJson::array();
      for (const auto& t : fn.terms())
        terms.push_back(OrderedJson{{"amplitude", t.amplitude}, {"rate", t.rate}});
      j["terms"] = std::move(terms);
      break;
    }
    case ScalarFn::Kind::Tabulated:
      j["type"] = "tabulated";
      j["step"] = fn.table_step();
      j["samples"] = fn.table_samples();
      break;
  }
  return j;
}

ScalarFn scalar_fn_from_json(const OrderedJson& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "constant") return ScalarFn::constant(j.at("value").get<double>());
  if (type == "exponential-sum") {
    std::vector<ExpTerm> terms;
    for (const auto& t : j.at("terms"))
      terms.push_back({t.at("amplitude").get<double>(), t.at("rate").get<double>()});
    return ScalarFn::exponential_sum(std::move(terms));
  }
  if (type == "tabulated")
    return ScalarFn::tabulated(j.at("step").get<double>(),
                               j.at("samples").get<std::vector<double>>());
  throw std::runtime_error("unknown scalar function type: " + type);
}

OrderedJson spec_to_json(const KernelSpec& spec) {
  OrderedJson j;
  j["dimension"] = spec.dimension;
  j["basis_labels"] = spec.basis_labels;
  OrderedJson eps = OrderedJson::array();
  for (const auto& e : spec.epsilon) eps.push_back(scalar_fn_to_json(e));
  j["epsilon"] = std::move(eps);
  OrderedJson channels = OrderedJson::array();
  for (const auto& ch : spec.channels) {
    OrderedJson c;
    c["matrix"] = complex_matrix_to_json(ch.matrix);
    c["profile"] = scalar_fn_to_json(ch.profile);
    channels.push_back(std::move(c));
  }
  j["channels"] = std::move(channels);
  if (spec.classical) {
    OrderedJson c;
    c["pi"] = real_matrix_to_json(spec.classical->pi);
    OrderedJson k = OrderedJson::array();
    for (const auto& fn : spec.classical->k) k.push_back(scalar_fn_to_json(fn));
    c["k"] = std::move(k);
    j["classical"] = std::move(c);
  }
  return j;
}

KernelSpec spec_from_json(const OrderedJson& j) {
  KernelSpec spec;
  spec.dimension = j.at("dimension").get<int>();
  if (j.contains("basis_labels"))
    spec.basis_labels = j.at("basis_labels").get<std::vector<std::string>>();
  for (const auto& e : j.at("epsilon")) spec.epsilon.push_back(scalar_fn_from_json(e));
  if (j.contains("channels")) {
    for (const auto& c : j.at("channels")) {
      JumpChannel ch;
      ch.matrix = complex_matrix_from_json(c.at("matrix"));
      ch.profile = scalar_fn_from_json(c.at("profile"));
      spec.channels.push_back(std::move(ch));
    }
  }
  if (j.contains("classical")) {
    ClassicalAnnotation classical;
    classical.pi = real_matrix_from_json(j.at("classical").at("pi"));
    for (const auto& fn : j.at("classical").at("k"))
      classical.k.push_back(scalar_fn_from_json(fn));
    spec.classical = std::move(classical);
  }
  return spec;
}

void save_spec(const KernelSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << spec_to_json(spec).dump(2) << "\n";
}

KernelSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file " + path);
  OrderedJson j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("invalid JSON in " + path + ": " + e.what());
  }
  return spec_from_json(j);
}

OrderedJson report_to_json(const CPReport& report) {
  OrderedJson j;
  j["classical_valid"] = verdict_to_json(report.classical_valid);
  j["cond1"] = verdict_to_json(report.cond1);
  j["cond2"] = verdict_to_json(report.cond2);
  j["choi"] = verdict_to_json(report.choi);
  OrderedJson survival = OrderedJson::array();
  for (const auto& s : report.survival) {
    OrderedJson e;
    e["level"] = s.level;
    e["earliest_negative_time"] =
        s.earliest_negative_time ? OrderedJson(*s.earliest_negative_time) : OrderedJson(nullptr);
    e["refined_time"] = s.refined_time ? OrderedJson(*s.refined_time) : OrderedJson(nullptr);
    survival.push_back(std::move(e));
  }
  j["survival"] = std::move(survival);
  j["tolerances"] = OrderedJson{{"psd_rel", report.tol_psd_rel},
                                {"classical_rel", report.tol_classical_rel},
                                {"solver_band", report.solver_band}};
  j["grid"] = OrderedJson{{"h", report.grid_step}, {"steps", report.grid_steps}};
  j["choi_mode"] = report.choi_mode_used;
  j["warnings"] = report.warnings;
  return j;
}

}  // namespace memkernel
