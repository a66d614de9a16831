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


#include <psym/psym.h>

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include <psym/flows.hpp>
#include <psym/numeric.hpp>
#include <psym/report.hpp>

struct psym_model {
    psym::ModelSpec spec;
};

struct psym_analysis {
    psym::ModelSpec spec;
    psym::AnalysisReport report;
};

struct psym_flows {
    std::vector<psym::Variable> parameters;
    std::vector<psym::FlowTrajectory> trajectories;
};

struct psym_certificate {
    psym::ModelSpec spec;
    psym::ResidualCertificate cert;
    psym::Simulation sim;
};

namespace {

thread_local std::string last_error;

psym_status fail(psym_status s, const std::string &msg)
{
    last_error = msg;
    return s;
}

// Runs `f`, translating exceptions into status codes.
template <class F> psym_status guarded(F &&f)
{
    using namespace psym;
    try {
        f();
        last_error.clear();
        return PSYM_OK;
    } catch (const EliminationFailed &e) {
        return fail(PSYM_E_ELIMINATION_FAILED, e.what());
    } catch (const ParseError &e) {
        return fail(PSYM_E_PARSE, e.what());
    } catch (const ValidationError &e) {
        return fail(PSYM_E_VALIDATION, e.what());
    } catch (const LeadingNotLinear &e) {
        return fail(PSYM_E_LEADING_NOT_LINEAR, e.what());
    } catch (const UnknownVariable &e) {
        return fail(PSYM_E_UNKNOWN_VARIABLE, e.what());
    } catch (const NonLinearInChi &e) {
        return fail(PSYM_E_NONLINEAR_IN_CHI, e.what());
    } catch (const SymbolicRankMismatch &e) {
        return fail(PSYM_E_SYMBOLIC_RANK_MISMATCH, e.what());
    } catch (const BlowUp &e) {
        return fail(PSYM_E_BLOWUP, e.what());
    } catch (const PoleOnTrajectory &e) {
        return fail(PSYM_E_POLE_ON_TRAJECTORY, e.what());
    } catch (const UnknownCoordinate &e) {
        return fail(PSYM_E_UNKNOWN_COORDINATE, e.what());
    } catch (const InvalidArgument &e) {
        return fail(PSYM_E_INVALID_ARGUMENT, e.what());
    } catch (const DivisionByZero &e) {
        return fail(PSYM_E_ALGEBRA, e.what());
    } catch (const PoleAtPoint &e) {
        return fail(PSYM_E_ALGEBRA, e.what());
    } catch (const ExponentOverflow &e) {
        return fail(PSYM_E_ALGEBRA, e.what());
    } catch (const NotExactDivision &e) {
        return fail(PSYM_E_ALGEBRA, e.what());
    } catch (const std::bad_alloc &) {
        return fail(PSYM_E_OUT_OF_MEMORY, "out of memory");
    } catch (const std::exception &e) {
        return fail(PSYM_E_INTERNAL, e.what());
    } catch (...) {
        return fail(PSYM_E_INTERNAL, "unknown failure");
    }
}

void need(const void *p, const char *what)
{
    if (!p) {
        throw psym::InvalidArgument(std::string(what) + " must not be NULL");
    }
}

char *dup(const std::string &s)
{
    char *p = static_cast<char *>(std::malloc(s.size() + 1));
    if (!p) {
        throw std::bad_alloc();
    }
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

std::string trim(const std::string &s)
{
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        auto next = s.find(sep, pos);
        out.push_back(trim(s.substr(pos, next - pos)));
        if (next == std::string::npos) {
            return out;
        }
        pos = next + 1;
    }
}

// Integer, p/q, or a decimal with optional exponent, all read exactly.
psym::BigRational parse_rational(const std::string &text)
{
    auto bad = [&] { return psym::InvalidArgument("'" + text + "' is not a number"); };
    std::string s = trim(text);
    if (s.empty()) {
        throw bad();
    }
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        psym::BigRational n = parse_rational(s.substr(0, slash)), d = parse_rational(s.substr(slash + 1));
        if (d == 0) {
            throw bad();
        }
        return n / d;
    }
    std::size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') {
        neg = s[i++] == '-';
    }
    std::string digits;
    long scale = 0;
    bool any = false, dot = false;
    for (; i < s.size() && s[i] != 'e' && s[i] != 'E'; ++i) {
        if (s[i] == '.' && !dot) {
            dot = true;
        } else if (s[i] >= '0' && s[i] <= '9') {
            digits += s[i];
            any = true;
            scale -= dot ? 1 : 0;
        } else {
            throw bad();
        }
    }
    if (!any) {
        throw bad();
    }
    if (i < s.size()) {
        char *end = nullptr;
        std::string ex = s.substr(i + 1);
        long e = std::strtol(ex.c_str(), &end, 10);
        if (ex.empty() || *end != '\0' || e > 4000 || e < -4000) {
            throw bad();
        }
        scale += e;
    }
    mpz_class m(digits, 10), p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
    psym::BigRational q = scale >= 0 ? psym::BigRational(m * p) : psym::BigRational(m, p);
    q.canonicalize();
    return neg ? psym::BigRational(-q) : q;
}

std::vector<psym::BigRational> parse_rationals(const char *text, std::size_t expected, const char *what)
{
    std::vector<psym::BigRational> out;
    for (const auto &s : split(text, ',')) {
        out.push_back(parse_rational(s));
    }
    if (out.size() != expected) {
        throw psym::InvalidArgument(std::string(what) + ": expected " + std::to_string(expected) + " values, got " +
                                    std::to_string(out.size()));
    }
    return out;
}

std::vector<double> parse_reals(const char *text, std::size_t expected, const char *what)
{
    std::vector<double> out;
    for (const auto &q : parse_rationals(text, expected, what)) {
        out.push_back(psym::to_double(q));
    }
    return out;
}

psym::GeneratorInstance instance(const psym_analysis *a, const char *alpha)
{
    const auto &b = a->report.basis;
    std::vector<psym::BigRational> w(b.dimension(), psym::BigRational(1));
    if (alpha) {
        w = parse_rationals(alpha, b.dimension(), "alpha");
    }
    return {b, w};
}

} // namespace

extern "C" {

const char *psym_version(void) { return "0.1.0"; }

const char *psym_status_name(psym_status s)
{
    switch (s) {
    case PSYM_OK:
        return "ok";
    case PSYM_E_INVALID_ARGUMENT:
        return "invalid_argument";
    case PSYM_E_PARSE:
        return "parse_error";
    case PSYM_E_VALIDATION:
        return "validation_error";
    case PSYM_E_ELIMINATION_FAILED:
        return "elimination_failed";
    case PSYM_E_LEADING_NOT_LINEAR:
        return "leading_not_linear";
    case PSYM_E_UNKNOWN_VARIABLE:
        return "unknown_variable";
    case PSYM_E_NONLINEAR_IN_CHI:
        return "nonlinear_in_chi";
    case PSYM_E_SYMBOLIC_RANK_MISMATCH:
        return "symbolic_rank_mismatch";
    case PSYM_E_BLOWUP:
        return "blow_up";
    case PSYM_E_POLE_ON_TRAJECTORY:
        return "pole_on_trajectory";
    case PSYM_E_UNKNOWN_COORDINATE:
        return "unknown_coordinate";
    case PSYM_E_ALGEBRA:
        return "algebra_error";
    case PSYM_E_OUT_OF_MEMORY:
        return "out_of_memory";
    case PSYM_E_INTERNAL:
        break;
    }
    return "internal_error";
}

const char *psym_last_error(void) { return last_error.c_str(); }

void psym_string_free(char *s) { std::free(s); }

psym_status psym_model_load_file(const char *path, psym_model **out)
{
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new psym_model{psym::load_model_file(path)};
    });
}

psym_status psym_model_load_string(const char *source, psym_model **out)
{
    return guarded([&] {
        need(source, "source");
        need(out, "out");
        *out = new psym_model{psym::load_model(source)};
    });
}

const char *psym_model_name(const psym_model *m) { return m ? m->spec.name.c_str() : ""; }

size_t psym_model_parameter_count(const psym_model *m) { return m ? m->spec.parameters.size() : 0; }

void psym_model_free(psym_model *m) { delete m; }

void psym_analyze_options_init(psym_analyze_options *o)
{
    if (o) {
        psym::AnsatzConfig d;
        *o = {d.max_num_degree, d.max_den_factors, d.seed, nullptr};
    }
}

psym_status psym_analyze(const psym_model *m, const psym_analyze_options *o, psym_analysis **out)
{
    return guarded([&] {
        need(m, "model");
        need(out, "out");
        psym::AnsatzConfig cfg;
        const char *io_path = nullptr;
        if (o) {
            cfg.max_num_degree = o->max_num_degree;
            cfg.max_den_factors = o->max_den_factors;
            cfg.seed = o->seed;
            io_path = o->io_path;
        }
        auto *a = new psym_analysis{m->spec, {}};
        try {
            if (io_path) {
                psym::OutputSystem io = psym::load_io_file(io_path, m->spec);
                a->report = psym::analyze(m->spec, cfg, &io);
            } else {
                a->report = psym::analyze(m->spec, cfg);
            }
        } catch (...) {
            delete a;
            throw;
        }
        *out = a;
    });
}

size_t psym_analysis_parameter_count(const psym_analysis *a) { return a ? a->report.basis.parameters.size() : 0; }

const char *psym_analysis_parameter_name(const psym_analysis *a, size_t i)
{
    if (!a || i >= a->report.basis.parameters.size()) {
        return nullptr;
    }
    return a->report.basis.parameters[i].name().c_str();
}

size_t psym_analysis_basis_dimension(const psym_analysis *a) { return a ? a->report.basis.dimension() : 0; }

size_t psym_analysis_invariant_count(const psym_analysis *a) { return a ? a->report.invariants.invariants.size() : 0; }

int psym_analysis_incomplete(const psym_analysis *a) { return a && a->report.invariants.incomplete ? 1 : 0; }

int psym_analysis_cross_check(const psym_analysis *a) { return a && a->report.cross_check ? 1 : 0; }

psym_status psym_analysis_invariant(const psym_analysis *a, size_t i, char **out)
{
    return guarded([&] {
        need(a, "analysis");
        need(out, "out");
        const auto &invs = a->report.invariants.invariants;
        if (i >= invs.size()) {
            throw psym::InvalidArgument("invariant index out of range");
        }
        *out = dup(psym::invariant_string(invs[i]));
    });
}

psym_status psym_analysis_generator(const psym_analysis *a, size_t k, char **out)
{
    return guarded([&] {
        need(a, "analysis");
        need(out, "out");
        if (k >= a->report.basis.dimension()) {
            throw psym::InvalidArgument("generator index out of range");
        }
        *out = dup(psym::generator_string(a->report.basis, k));
    });
}

psym_status psym_analysis_json(const psym_analysis *a, int include_timing, char **out)
{
    return guarded([&] {
        need(a, "analysis");
        need(out, "out");
        *out = dup(psym::report_json(a->report, include_timing != 0));
    });
}

psym_status psym_analysis_text(const psym_analysis *a, char **out)
{
    return guarded([&] {
        need(a, "analysis");
        need(out, "out");
        *out = dup(psym::report_text(a->report));
    });
}

psym_status psym_analysis_matrix_json(const psym_analysis *a, char **out)
{
    return guarded([&] {
        need(a, "analysis");
        need(out, "out");
        *out = dup(psym::matrix_json(a->report.matrix));
    });
}

void psym_analysis_free(psym_analysis *a) { delete a; }

void psym_flow_options_init(psym_flow_options *o)
{
    if (o) {
        *o = {nullptr, nullptr, 6, -1.0, 1.0, 201, 1, 1};
    }
}

psym_status psym_flows_compute(const psym_analysis *a, const psym_flow_options *o, psym_flows **out)
{
    return guarded([&] {
        need(a, "analysis");
        need(o, "options");
        need(out, "out");
        psym::GeneratorInstance inst = instance(a, o->alpha);
        psym::FlowOptions fo;
        fo.require_positive = o->require_positive != 0;
        auto grid = psym::eps_grid(o->eps_lo, o->eps_hi, o->points);
        std::vector<std::vector<psym::BigRational>> starts;
        if (o->theta0) {
            starts.push_back(parse_rationals(o->theta0, inst.basis.parameters.size(), "theta0"));
        } else {
            starts = psym::seeded_starts(inst, grid, o->starts, o->seed, fo);
        }
        auto *f = new psym_flows{inst.basis.parameters, {}};
        try {
            for (std::size_t i = 0; i < starts.size(); ++i) {
                f->trajectories.push_back(psym::flow(inst, starts[i], grid, fo, i));
            }
        } catch (...) {
            delete f;
            throw;
        }
        *out = f;
    });
}

size_t psym_flows_count(const psym_flows *f) { return f ? f->trajectories.size() : 0; }

psym_status psym_flows_csv(const psym_flows *f, const char *coords, char **out)
{
    return guarded([&] {
        need(f, "flows");
        need(coords, "coords");
        need(out, "out");
        *out = dup(psym::emit_projection(f->trajectories, split(coords, ','), f->parameters));
    });
}

void psym_flows_free(psym_flows *f) { delete f; }

void psym_verify_options_init(psym_verify_options *o)
{
    if (o) {
        *o = {nullptr, nullptr, nullptr, 0.0, nullptr, nullptr, 5.0, 51, 1e-3};
    }
}

psym_status psym_verify(const psym_analysis *a, const psym_verify_options *o, psym_certificate **out)
{
    return guarded([&] {
        need(a, "analysis");
        need(o, "options");
        need(o->theta, "theta");
        need(out, "out");
        const auto &spec = a->spec;
        const std::size_t np = spec.parameters.size();
        auto theta = parse_reals(o->theta, np, "theta");
        std::vector<double> hat =
            o->theta_hat ? parse_reals(o->theta_hat, np, "theta_hat") : psym::flowed_parameters(instance(a, o->alpha), theta, o->eps);

        psym::SimulationConfig cfg;
        if (o->initial_states) {
            cfg.initial_states = parse_reals(o->initial_states, spec.states.size(), "initial states");
        } else {
            for (std::size_t i = 0; i < spec.states.size(); ++i) {
                cfg.initial_states.push_back(0.5 + 0.2 * double(i));
            }
        }
        if (!(o->t_end > 0) || o->times < 2) {
            throw psym::InvalidArgument("time grid needs t_end > 0 and at least 2 samples");
        }
        for (std::size_t i = 0; i < o->times; ++i) {
            cfg.time_grid.push_back(o->t_end * double(i) / double(o->times - 1));
        }
        cfg.step = o->step;
        for (auto u : spec.inputs) {
            cfg.inputs[u.name()] = psym::Signal::sine(1, 1);
        }
        if (o->inputs && *o->inputs) {
            for (const auto &item : split(o->inputs, ';')) {
                auto eq = item.find('=');
                std::string name = trim(item.substr(0, eq));
                if (eq == std::string::npos || !cfg.inputs.count(name)) {
                    throw psym::InvalidArgument("input binding '" + item + "' does not name a model input");
                }
                cfg.inputs[name] = psym::Signal::parse(item.substr(eq + 1));
            }
        }
        auto *c = new psym_certificate{spec, {}, {}};
        try {
            c->cert = psym::residual_check(a->report.io, spec, theta, hat, cfg);
            c->sim = psym::simulate(spec, theta, cfg);
        } catch (...) {
            delete c;
            throw;
        }
        *out = c;
    });
}

psym_outcome psym_certificate_outcome(const psym_certificate *c)
{
    if (!c) {
        return PSYM_INCONCLUSIVE;
    }
    switch (c->cert.outcome) {
    case psym::Outcome::Pass:
        return PSYM_PASS;
    case psym::Outcome::Fail:
        return PSYM_FAIL;
    case psym::Outcome::Inconclusive:
        break;
    }
    return PSYM_INCONCLUSIVE;
}

double psym_certificate_residual(const psym_certificate *c) { return c ? c->cert.max_abs_residual : 0.0; }

psym_status psym_certificate_json(const psym_certificate *c, char **out)
{
    return guarded([&] {
        need(c, "certificate");
        need(out, "out");
        *out = dup(psym::certificate_json(c->cert, c->spec));
    });
}

psym_status psym_certificate_trajectory_csv(const psym_certificate *c, char **out)
{
    return guarded([&] {
        need(c, "certificate");
        need(out, "out");
        *out = dup(psym::simulation_csv(c->sim, c->spec));
    });
}

void psym_certificate_free(psym_certificate *c) { delete c; }

} // extern "C"
