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


// Runs the psym executable and checks exit codes and outputs.

#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string &args)
{
    std::string cmd = std::string(PSYM_CLI) + " " + args + " 2>/dev/null";
    Run r{-1, ""};
    FILE *p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) {
        r.out.append(buf, n);
    }
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string fx(const char *name) { return std::string(PSYM_FIXTURE_DIR) + "/" + name; }

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const char *name)
{
    fs::path d = fs::temp_directory_path() / ("psym_cli_test_" + std::string(name));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

} // namespace

TEST_CASE("analyze reports and exit codes")
{
    Run toy = run("analyze " + fx("toy.psym"));
    CHECK(toy.code == 0);
    CHECK(toy.out.find("generators (dimension 1)") != std::string::npos);
    CHECK(toy.out.find("X1 = d/dkappa1 - d/dkappa2") != std::string::npos);
    CHECK(toy.out.find("lambda  globally structurally identifiable") != std::string::npos);
    CHECK(toy.out.find("model: not globally structurally identifiable") != std::string::npos);

    Run g = run("analyze " + fx("glucose.psym") + " --json - --no-timing");
    CHECK(g.code == 0);
    CHECK(g.out.find("\"p2*p4\"") != std::string::npos);
    CHECK(g.out.find("timing") == std::string::npos);
    CHECK(run("analyze " + fx("glucose.psym") + " --json - --no-timing").out == g.out);
    CHECK(run("analyze " + fx("glucose.psym") + " --io " + fx("glucose.io") + " --json - --no-timing").code == 0);

    Run sei = run("analyze " + fx("sei.psym"));
    CHECK(sei.code == 0);
    CHECK(sei.out.find("independence rank 7 of 7") != std::string::npos);
    CHECK(sei.out.find("mu_I     globally structurally identifiable") != std::string::npos);

    fs::path d = scratch("analyze");
    CHECK(run("analyze " + fx("toy.psym") + " --json " + (d / "r.json").string()).code == 0);
    CHECK(slurp(d / "r.json").find("\"timing_seconds\"") != std::string::npos);

    CHECK(run("analyze " + fx("square.psym")).code == 2);
    CHECK(run("analyze " + fx("square.psym") + " --io " + fx("square.io")).code == 0);
    CHECK(run("analyze " + fx("sei.psym") + " --max-num-degree 1 --max-den-factors 0").code == 3);
    CHECK(run("analyze").code == 64);
    CHECK(run("analyze /nonexistent.psym").code == 64);
    CHECK(run("frobnicate").code == 64);
    CHECK(run("--help").code == 0);
}

TEST_CASE("flows writes CSV projections")
{
    fs::path d = scratch("flows");
    Run r = run("flows " + fx("sei.psym") + " --alpha 1,-2 --coords mu_E,delta --coords beta,c*upsilon --csv-dir " +
                d.string());
    CHECK(r.code == 0);
    std::string a = slurp(d / "sei_flow_mu_E_delta.csv");
    CHECK(a.rfind("eps,mu_E,delta,traj_id\n", 0) == 0);
    CHECK(std::count(a.begin(), a.end(), '\n') == 1 + 6 * 201);
    CHECK(fs::exists(d / "sei_flow_beta_c_upsilon.csv"));

    CHECK(run("flows " + fx("glucose.psym") + " --eps-range 0,0 --coords p2,p4 --csv-dir " + d.string()).code == 0);
    std::string g = slurp(d / "glucose_flow_p2_p4.csv");
    CHECK(std::count(g.begin(), g.end(), '\n') == 7);

    CHECK(run("flows " + fx("toy.psym") + " --csv-dir " + d.string()).code == 0);
    CHECK(fs::exists(d / "toy_flow_kappa1_kappa2_lambda.csv"));
    CHECK(run("flows " + fx("toy.psym") + " --coords nope --csv-dir " + d.string()).code == 1);
    CHECK(run("flows " + fx("sei.psym") + " --alpha 1 --csv-dir " + d.string()).code == 1);
    CHECK(run("flows " + fx("square.psym") + " --csv-dir " + d.string()).code == 2);
}

TEST_CASE("verify pass and fail")
{
    Run pass = run("verify " + fx("toy.psym") + " --theta 1,1,1 --eps 0.3");
    CHECK(pass.code == 0);
    CHECK(pass.out.rfind("pass:", 0) == 0);
    Run fail = run("verify " + fx("toy.psym") + " --theta 1,1,1 --theta-hat 1,1,1.1");
    CHECK(fail.code == 4);
    CHECK(fail.out.rfind("fail:", 0) == 0);
    CHECK(run("verify " + fx("toy.psym") + " --theta 1,1,1 --eps 0").code == 0);
    CHECK(run("verify " + fx("toy.psym") + " --theta 1,1,1 --theta-hat 1,1,1.0000001").code == 5);

    fs::path d = scratch("verify");
    Run j = run("verify " + fx("glucose.psym") + " --theta 1,2,3,4,5 --eps -0.5 --input 'u=sine(2,0.5)' --json - --csv-dir " +
                d.string());
    CHECK(j.code == 0);
    CHECK(j.out.find("\"outcome\": \"pass\"") != std::string::npos);
    CHECK(slurp(d / "glucose_trajectory.csv").rfind("t,x1,x2,y,traj_id\n", 0) == 0);
    CHECK(run("verify " + fx("glucose.psym") + " --theta 1,2,3,4,5 --input v=zero").code == 1);
    CHECK(run("verify " + fx("toy.psym")).code == 64);
    CHECK(run("verify " + fx("toy.psym") + " --theta 1,1,1 --theta-hat 1,1,1 --eps 1").code == 64);
}
