// Copyright 2026 The psym Authors
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


#include <doctest.h>

#include <json.hpp>

#include <psym/report.hpp>

#include "fixtures.hpp"

using namespace psym;
using nlohmann::json;

TEST_CASE("toy condition matrix golden JSON")
{
    AnalysisReport r = analyze(testutil::load("toy.psym"));
    // Rows: constant jet monomial (chi_kappa1 + chi_kappa2, negated) and y (chi_lambda).
    json expected = json::parse(R"({
      "rows": 2, "columns": 3, "parameters": ["kappa1", "kappa2", "lambda"],
      "entries": [
        {"equation": 0, "key": "1", "sign": -1, "entries": ["1", "1", "0"]},
        {"equation": 0, "key": "y", "sign": 1, "entries": ["0", "0", "1"]}
      ]})");
    CHECK(json::parse(matrix_json(r.matrix)) == expected);
    CHECK(json::parse(basis_json(r.basis)) ==
          json::parse(R"({"dimension": 1, "parameters": ["kappa1", "kappa2", "lambda"],
                          "vectors": [["1", "-1", "0"]], "generators": ["d/dkappa1 - d/dkappa2"]})"));
}

TEST_CASE("analysis report contents")
{
    AnalysisReport r = analyze(testutil::load("sei.psym"));
    json doc = json::parse(report_json(r, false));
    CHECK(doc["schema_version"] == kReportSchemaVersion);
    CHECK(doc["model"] == "sei");
    CHECK(doc["output_system"]["equation_count"] == 2);
    CHECK(doc["output_system"]["orders"]["y_I"] == 2);
    CHECK(doc["condition_matrix"]["rows"] == 11);
    CHECK(doc["condition_matrix"]["columns"] == 9);
    CHECK(doc["basis"]["dimension"] == 2);
    CHECK(doc["invariant_report"]["invariants"].size() == 7);
    CHECK(doc["invariant_report"]["identifiable"] == json::array({"mu_S", "mu_I"}));
    CHECK(doc["invariant_report"]["verdicts"]["beta"] == "unidentifiable");
    CHECK(doc["invariant_report"]["independence_rank"] == 7);
    CHECK(doc["cross_check"]["agrees"] == true);
    CHECK_FALSE(doc.contains("timing_seconds"));

    json timed = json::parse(report_json(r, true));
    for (const char *stage : {"reduce", "symcond", "nullspace", "invariants", "cross_check"}) {
        CHECK(timed["timing_seconds"].contains(stage));
    }
    // Byte-identical across runs once timings are excluded.
    CHECK(report_json(analyze(testutil::load("sei.psym")), false) == report_json(r, false));

    std::string text = report_text(r);
    CHECK(text.find("X2 = ") != std::string::npos);
    CHECK(text.find("upsilon/(-delta*upsilon + delta)") != std::string::npos);
    CHECK(text.find("model: not globally structurally identifiable") != std::string::npos);
}

TEST_CASE("supplied output system and certificates")
{
    ModelSpec g = testutil::load("glucose.psym");
    OutputSystem io = load_io_file(testutil::fixture("glucose.io"), g);
    AnalysisReport r = analyze(g, {}, &io);
    CHECK(r.io_supplied);
    json doc = json::parse(report_json(r, false));
    CHECK(doc["output_system"]["source"] == "file");
    CHECK(doc["basis"]["vectors"][0] == json::array({"0", "p2", "0", "-p4", "0"}));
    CHECK(r.timings.size() == 4);

    ResidualCertificate c;
    c.theta = {1, 2, 3, 4, 5};
    c.theta_hat = {1, 4, 3, 2, 5};
    c.profile = {{1e-17, 3e-16}};
    c.max_abs_residual = 3e-16;
    json cj = json::parse(certificate_json(c, g));
    CHECK(cj["theta_hat"]["p2"] == 4.0);
    CHECK(cj["per_equation_max"][0] == 3e-16);
    CHECK(cj["outcome"] == "pass");
}
