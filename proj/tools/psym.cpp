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


// psym command-line tool. Uses only the C API.
//
// Exit codes: 0 success or verify pass, 1 error, 2 elimination failed,
// 3 incomplete invariant set, 4 verify fail, 5 verify inconclusive, 64 usage.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <psym/psym.h>

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kError = 1, kElimination = 2, kIncomplete = 3, kVerifyFail = 4, kInconclusive = 5, kUsage = 64 };

struct Failure {
    int code;
};

struct Deleter {
    void operator()(psym_model *p) const { psym_model_free(p); }
    void operator()(psym_analysis *p) const { psym_analysis_free(p); }
    void operator()(psym_flows *p) const { psym_flows_free(p); }
    void operator()(psym_certificate *p) const { psym_certificate_free(p); }
};
template <class T> using Handle = std::unique_ptr<T, Deleter>;

void check(psym_status s)
{
    if (s == PSYM_OK) {
        return;
    }
    std::cerr << "psym: " << psym_status_name(s) << ": " << psym_last_error() << "\n";
    if (s == PSYM_E_ELIMINATION_FAILED) {
        throw Failure{kElimination};
    }
    throw Failure{kError};
}

std::string take(char *s)
{
    std::string out(s ? s : "");
    psym_string_free(s);
    return out;
}

// Writes via a temporary file in the same directory and renames it.
void write_file(const std::string &path, const std::string &text)
{
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        out << text;
        if (!out) {
            std::cerr << "psym: cannot write '" << path << "'\n";
            throw Failure{kError};
        }
    }
    fs::rename(tmp, path);
}

std::string sanitize(const std::string &s)
{
    std::string out;
    for (char c : s) {
        out += std::isalnum(static_cast<unsigned char>(c)) || c == '_' ? c : '_';
    }
    return out;
}

struct Common {
    std::string model;
    std::string io;
    psym_analyze_options opts{};
};

void add_common(CLI::App *cmd, Common &c)
{
    psym_analyze_options_init(&c.opts);
    cmd->add_option("model", c.model, "model file (.psym)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--io", c.io, "input-output equations file; skips elimination")->check(CLI::ExistingFile);
    cmd->add_option("--max-num-degree", c.opts.max_num_degree, "numerator degree bound of the invariant ansatz")
        ->capture_default_str();
    cmd->add_option("--max-den-factors", c.opts.max_den_factors, "denominator factors of the invariant ansatz")
        ->capture_default_str();
    cmd->add_option("--seed", c.opts.seed, "seed of all randomized checks")->capture_default_str();
}

Handle<psym_analysis> run_analysis(Common &c)
{
    psym_model *m = nullptr;
    check(psym_model_load_file(c.model.c_str(), &m));
    Handle<psym_model> model(m);
    c.opts.io_path = c.io.empty() ? nullptr : c.io.c_str();
    psym_analysis *a = nullptr;
    check(psym_analyze(model.get(), &c.opts, &a));
    return Handle<psym_analysis>(a);
}

std::string model_stem(const std::string &path) { return sanitize(fs::path(path).stem().string()); }

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"psym: parameter symmetries and structural identifiability of rational ODE models"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(psym_version()));

    Common an;
    std::string json_path;
    bool no_timing = false;
    auto *analyze = app.add_subcommand("analyze", "compute generators, invariants and identifiability verdicts");
    add_common(analyze, an);
    analyze->add_option("--json", json_path, "write the JSON report to this path ('-' for stdout)");
    analyze->add_flag("--no-timing", no_timing, "omit stage timings from the JSON report");

    Common fl;
    psym_flow_options fo;
    psym_flow_options_init(&fo);
    std::string alpha, theta0, eps_range = "-1,1", csv_dir = ".";
    std::vector<std::string> coords;
    std::size_t starts = fo.starts, points = fo.points;
    bool allow_nonpositive = false;
    auto *flows = app.add_subcommand("flows", "integrate parameter flows and write CSV projections");
    add_common(flows, fl);
    flows->add_option("--alpha", alpha, "weights of the printed basis vectors, e.g. 2,1 (default all ones)");
    flows->add_option("--theta0", theta0, "one starting point (default: seeded starts)");
    flows->add_option("--starts", starts, "number of seeded starting points")->capture_default_str();
    flows->add_option("--eps-range", eps_range, "eps interval lo,hi")->capture_default_str();
    flows->add_option("--points", points, "samples on the eps interval")->capture_default_str();
    flows->add_option("--coords", coords, "projection, e.g. mu_E,delta (repeatable; default all parameters)");
    flows->add_option("--csv-dir", csv_dir, "output directory")->capture_default_str();
    flows->add_flag("--allow-nonpositive", allow_nonpositive, "do not stop when a parameter leaves the positive orthant");

    Common ve;
    psym_verify_options vo;
    psym_verify_options_init(&vo);
    std::string theta, theta_hat, valpha, x0, cert_json, traj_dir;
    std::vector<std::string> inputs;
    double eps = 0, t_end = vo.t_end, step = vo.step;
    std::size_t times = vo.times;
    auto *verify = app.add_subcommand("verify", "check output invariance of a parameter transform numerically");
    add_common(verify, ve);
    verify->add_option("--theta", theta, "parameters of the simulated trajectory")->required();
    auto *hat = verify->add_option("--theta-hat", theta_hat, "transformed parameters to test directly");
    verify->add_option("--alpha", valpha, "generator weights for the flowed transform (default all ones)")->excludes(hat);
    verify->add_option("--eps", eps, "flow parameter of the transform")->excludes(hat);
    verify->add_option("--x0", x0, "initial states (default 0.5, 0.7, 0.9, ...)");
    verify->add_option("--input", inputs, "input binding, e.g. u=sine(1,1) (repeatable)");
    verify->add_option("--t-end", t_end, "end of the time grid")->capture_default_str();
    verify->add_option("--times", times, "samples on [0, t-end]")->capture_default_str();
    verify->add_option("--step", step, "RK4 step bound")->capture_default_str();
    verify->add_option("--json", cert_json, "write the residual certificate ('-' for stdout)");
    verify->add_option("--csv-dir", traj_dir, "write the simulated trajectory CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*analyze) {
            auto a = run_analysis(an);
            char *s = nullptr;
            if (!json_path.empty()) {
                check(psym_analysis_json(a.get(), no_timing ? 0 : 1, &s));
                write_file(json_path, take(s));
            }
            if (json_path != "-") {
                check(psym_analysis_text(a.get(), &s));
                std::cout << take(s);
            }
            if (psym_analysis_incomplete(a.get())) {
                std::cerr << "psym: incomplete invariant set; try a larger --max-num-degree or --max-den-factors\n";
                return kIncomplete;
            }
            return kOk;
        }

        if (*flows) {
            auto a = run_analysis(fl);
            auto comma = eps_range.find(',');
            if (comma == std::string::npos) {
                std::cerr << "psym: --eps-range expects lo,hi\n";
                return kUsage;
            }
            try {
                fo.eps_lo = std::stod(eps_range.substr(0, comma));
                fo.eps_hi = std::stod(eps_range.substr(comma + 1));
            } catch (const std::exception &) {
                std::cerr << "psym: --eps-range expects two numbers\n";
                return kUsage;
            }
            fo.alpha = alpha.empty() ? nullptr : alpha.c_str();
            fo.theta0 = theta0.empty() ? nullptr : theta0.c_str();
            fo.starts = starts;
            fo.points = points;
            fo.seed = fl.opts.seed;
            fo.require_positive = allow_nonpositive ? 0 : 1;
            psym_flows *f = nullptr;
            check(psym_flows_compute(a.get(), &fo, &f));
            Handle<psym_flows> traj(f);
            if (coords.empty()) {
                // Default projection: every parameter, in model order.
                std::string all;
                for (std::size_t i = 0; i < psym_analysis_parameter_count(a.get()); ++i) {
                    all += (i ? "," : "") + std::string(psym_analysis_parameter_name(a.get(), i));
                }
                coords.push_back(all);
            }
            fs::create_directories(csv_dir);
            for (const auto &c : coords) {
                char *csv = nullptr;
                check(psym_flows_csv(traj.get(), c.c_str(), &csv));
                fs::path out = fs::path(csv_dir) / (model_stem(fl.model) + "_flow_" + sanitize(c) + ".csv");
                write_file(out.string(), take(csv));
                std::cout << out.string() << "\n";
            }
            return kOk;
        }

        auto a = run_analysis(ve);
        std::string bindings;
        for (const auto &b : inputs) {
            bindings += (bindings.empty() ? "" : ";") + b;
        }
        vo.theta = theta.c_str();
        vo.theta_hat = theta_hat.empty() ? nullptr : theta_hat.c_str();
        vo.alpha = valpha.empty() ? nullptr : valpha.c_str();
        vo.eps = eps;
        vo.initial_states = x0.empty() ? nullptr : x0.c_str();
        vo.inputs = bindings.c_str();
        vo.t_end = t_end;
        vo.times = times;
        vo.step = step;
        psym_certificate *c = nullptr;
        check(psym_verify(a.get(), &vo, &c));
        Handle<psym_certificate> cert(c);
        char *s = nullptr;
        if (!cert_json.empty()) {
            check(psym_certificate_json(cert.get(), &s));
            write_file(cert_json, take(s));
        }
        if (!traj_dir.empty()) {
            fs::create_directories(traj_dir);
            check(psym_certificate_trajectory_csv(cert.get(), &s));
            fs::path out = fs::path(traj_dir) / (model_stem(ve.model) + "_trajectory.csv");
            write_file(out.string(), take(s));
        }
        double r = psym_certificate_residual(cert.get());
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3g", r);
        switch (psym_certificate_outcome(cert.get())) {
        case PSYM_PASS:
            if (cert_json != "-") {
                std::cout << "pass: normalized residual " << buf << " <= 1e-08 (outputs invariant)\n";
            }
            return kOk;
        case PSYM_FAIL:
            if (cert_json != "-") {
                std::cout << "fail: normalized residual " << buf << " >= 0.001 (outputs change)\n";
            }
            return kVerifyFail;
        case PSYM_INCONCLUSIVE:
            break;
        }
        if (cert_json != "-") {
            std::cout << "inconclusive: normalized residual " << buf << " between 1e-08 and 0.001\n";
        }
        return kInconclusive;
    } catch (const Failure &f) {
        return f.code;
    } catch (const std::exception &e) {
        std::cerr << "psym: " << e.what() << "\n";
        return kError;
    }
}
