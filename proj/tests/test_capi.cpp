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


// Exercises the shared library through its C header only.

#include <doctest.h>

#include <cstring>
#include <string>

#include <psym/psym.h>

namespace {

std::string take(char *s)
{
    std::string out(s ? s : "");
    psym_string_free(s);
    return out;
}

std::string fixture(const char *name) { return std::string(PSYM_FIXTURE_DIR) + "/" + name; }

psym_analysis *analysed(const char *name, const char *io = nullptr)
{
    psym_model *m = nullptr;
    REQUIRE(psym_model_load_file(fixture(name).c_str(), &m) == PSYM_OK);
    psym_analyze_options o;
    psym_analyze_options_init(&o);
    std::string io_path = io ? fixture(io) : "";
    o.io_path = io ? io_path.c_str() : nullptr;
    psym_analysis *a = nullptr;
    psym_status s = psym_analyze(m, &o, &a);
    psym_model_free(m);
    REQUIRE_MESSAGE(s == PSYM_OK, psym_last_error());
    return a;
}

} // namespace

TEST_CASE("analysis through the C API")
{
    psym_analysis *a = analysed("sei.psym");
    CHECK(psym_analysis_basis_dimension(a) == 2);
    CHECK(psym_analysis_invariant_count(a) == 7);
    CHECK(psym_analysis_incomplete(a) == 0);
    CHECK(psym_analysis_cross_check(a) == 1);
    CHECK(psym_analysis_parameter_count(a) == 9);
    CHECK(std::string(psym_analysis_parameter_name(a, 8)) == "k_I");
    CHECK(psym_analysis_parameter_name(a, 9) == nullptr);
    char *s = nullptr;
    REQUIRE(psym_analysis_invariant(a, 2, &s) == PSYM_OK);
    CHECK(take(s) == "mu_E + delta");
    CHECK(psym_analysis_invariant(a, 7, &s) == PSYM_E_INVALID_ARGUMENT);
    CHECK(std::strlen(psym_last_error()) > 0);
    REQUIRE(psym_analysis_generator(a, 1, &s) == PSYM_OK);
    CHECK(take(s).find("d/dk_I") != std::string::npos);

    REQUIRE(psym_analysis_json(a, 0, &s) == PSYM_OK);
    std::string j1 = take(s);
    REQUIRE(psym_analysis_json(a, 0, &s) == PSYM_OK);
    CHECK(take(s) == j1);
    CHECK(j1.find("\"schema_version\": 1") != std::string::npos);
    CHECK(j1.find("timing") == std::string::npos);
    REQUIRE(psym_analysis_json(a, 1, &s) == PSYM_OK);
    CHECK(take(s).find("\"timing_seconds\"") != std::string::npos);
    REQUIRE(psym_analysis_matrix_json(a, &s) == PSYM_OK);
    std::string mj = take(s);
    CHECK(mj.find("\"rows\": 11") != std::string::npos);
    CHECK(mj.find("\"columns\": 9") != std::string::npos);
    REQUIRE(psym_analysis_text(a, &s) == PSYM_OK);
    CHECK(take(s).find("mu_S     globally structurally identifiable") != std::string::npos);
    psym_analysis_free(a);
}

TEST_CASE("flows and verification through the C API")
{
    psym_analysis *a = analysed("glucose.psym");
    psym_flow_options fo;
    psym_flow_options_init(&fo);
    fo.theta0 = "1,2,1,3,1";
    fo.eps_lo = 0;
    fo.eps_hi = 0.6931471805599453;
    fo.points = 2;
    psym_flows *f = nullptr;
    REQUIRE(psym_flows_compute(a, &fo, &f) == PSYM_OK);
    CHECK(psym_flows_count(f) == 1);
    char *s = nullptr;
    REQUIRE(psym_flows_csv(f, "p2,p4,p2*p4", &s) == PSYM_OK);
    std::string csv = take(s);
    CHECK(csv.find("0,2,3,6,0\n") != std::string::npos);
    CHECK(csv.find(",4,1.5,6,0\n") != std::string::npos);
    CHECK(psym_flows_csv(f, "q9", &s) == PSYM_E_UNKNOWN_COORDINATE);
    psym_flows_free(f);

    fo.theta0 = "1,2,3";
    CHECK(psym_flows_compute(a, &fo, &f) == PSYM_E_INVALID_ARGUMENT);
    fo.theta0 = "1,2,1,x,1";
    CHECK(psym_flows_compute(a, &fo, &f) == PSYM_E_INVALID_ARGUMENT);
    fo.theta0 = nullptr;
    fo.alpha = "1/2";
    fo.eps_lo = -1;
    fo.eps_hi = 1;
    fo.points = 21;
    REQUIRE(psym_flows_compute(a, &fo, &f) == PSYM_OK);
    CHECK(psym_flows_count(f) == 6);
    psym_flows_free(f);

    psym_verify_options vo;
    psym_verify_options_init(&vo);
    vo.theta = "0.8,1.2,0.5,0.9,1.5";
    vo.eps = 0.4;
    vo.inputs = "u=exp_decay(2,0.3)";
    psym_certificate *c = nullptr;
    REQUIRE(psym_verify(a, &vo, &c) == PSYM_OK);
    CHECK(psym_certificate_outcome(c) == PSYM_PASS);
    CHECK(psym_certificate_residual(c) <= 1e-8);
    REQUIRE(psym_certificate_json(c, &s) == PSYM_OK);
    CHECK(take(s).find("\"outcome\": \"pass\"") != std::string::npos);
    REQUIRE(psym_certificate_trajectory_csv(c, &s) == PSYM_OK);
    CHECK(take(s).rfind("t,x1,x2,y,traj_id\n", 0) == 0);
    psym_certificate_free(c);

    vo.theta_hat = "0.88,1.2,0.5,0.9,1.5";
    REQUIRE(psym_verify(a, &vo, &c) == PSYM_OK);
    CHECK(psym_certificate_outcome(c) == PSYM_FAIL);
    psym_certificate_free(c);

    vo.inputs = "w=zero";
    CHECK(psym_verify(a, &vo, &c) == PSYM_E_INVALID_ARGUMENT);
    vo.inputs = nullptr;
    vo.theta = nullptr;
    CHECK(psym_verify(a, &vo, &c) == PSYM_E_INVALID_ARGUMENT);
    psym_analysis_free(a);
}

TEST_CASE("status codes")
{
    psym_model *m = nullptr;
    CHECK(psym_model_load_file("/nonexistent.psym", &m) == PSYM_E_INVALID_ARGUMENT);
    CHECK(psym_model_load_string("model x\nstates\nend\n", &m) == PSYM_E_PARSE);
    CHECK(psym_model_load_string(nullptr, &m) == PSYM_E_INVALID_ARGUMENT);
    REQUIRE(psym_model_load_file(fixture("square.psym").c_str(), &m) == PSYM_OK);
    CHECK(std::string(psym_model_name(m)) == "square");
    CHECK(psym_model_parameter_count(m) == 1);
    psym_analysis *a = nullptr;
    CHECK(psym_analyze(m, nullptr, &a) == PSYM_E_ELIMINATION_FAILED);
    CHECK(a == nullptr);
    psym_model_free(m);

    a = analysed("square.psym", "square.io");
    CHECK(psym_analysis_basis_dimension(a) == 0);
    psym_analysis_free(a);

    CHECK(std::string(psym_status_name(PSYM_E_BLOWUP)) == "blow_up");
    CHECK(std::string(psym_version()) == "0.1.0");
    psym_model_free(nullptr);
    psym_analysis_free(nullptr);
    psym_string_free(nullptr);
}
