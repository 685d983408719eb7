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

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>

#include "memkernel/models.hpp"
#include "memkernel/spec_io.hpp"

using namespace memkernel;

TEST_CASE("scalar functions round-trip through their tagged form") {
  for (const auto& fn :
       {ScalarFn::constant(2.5), ScalarFn::exponential_sum({{1.0, 4.0}, {-0.25, 0.0}}),
        ScalarFn::tabulated(0.5, {1.0, 0.25, 0.0})}) {
    const auto back = scalar_fn_from_json(scalar_fn_to_json(fn));
    CHECK(back.structurally_equal(fn));
  }
  CHECK_THROWS(scalar_fn_from_json(OrderedJson{{"type", "mystery"}}));
}

TEST_CASE("spec json carries complex entries as [re, im] pairs row-major") {
  const auto model = two_level(ScalarFn::exponential_sum({{1.0, 4.0}}), ScalarFn::zero());
  const auto j = spec_to_json(model.spec);
  CHECK(j.at("dimension") == 2);
  // sigma_minus has its single entry in row 1, column 0
  const auto& entry = j.at("channels").at(0).at("matrix").at(1).at(0);
  CHECK(entry.at(0).get<double>() == 1.0);
  CHECK(entry.at(1).get<double>() == 0.0);
  CHECK(j.at("classical").at("pi").at(1).at(0).get<double>() == 1.0);
}

TEST_CASE("files round-trip through save and load") {
  const auto model = make_preset("ring3-cp-holding");
  const std::string path = "spec_io_roundtrip_test.json";
  save_spec(model.spec, path);
  const auto back = load_spec(path);
  std::remove(path.c_str());
  CHECK(back.dimension == model.spec.dimension);
  CHECK(back.channels.size() == model.spec.channels.size());
  REQUIRE(back.classical.has_value());
  CHECK((back.classical->pi - model.spec.classical->pi).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("loading rejects malformed documents") {
  const std::string path = "spec_io_malformed_test.json";
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  CHECK_THROWS_AS(load_spec(path), std::runtime_error);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_spec("definitely_missing_file.json"), std::runtime_error);
}

TEST_CASE("report serialization uses the fixed field names") {
  CPReport report;
  report.classical_valid.verdict = "pass";
  report.cond1.verdict = "fail";
  report.cond1.earliest_violation_time = 0.25;
  report.cond1.refined_time = 0.2471;
  report.cond2.verdict = "not_applicable";
  report.choi.verdict = "fail";
  report.survival.push_back({1, 2.418, 2.4184});
  report.grid_step = 1e-3;
  report.grid_steps = 1000;

  const auto j = report_to_json(report);
  for (const auto* key : {"classical_valid", "cond1", "cond2", "choi", "tolerances", "grid"})
    CHECK(j.contains(key));
  CHECK(j.at("classical_valid").at("earliest_violation_time").is_null());
  CHECK(j.at("cond1").at("earliest_violation_time").get<double>() == 0.25);
  CHECK(j.at("cond2").at("verdict") == "not_applicable");
  CHECK(j.at("grid").at("h").get<double>() == 1e-3);
  CHECK(j.at("survival").at(0).at("level").get<int>() == 1);
}
