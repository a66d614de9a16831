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

#include <cmath>

#include <psym/verify.hpp>

#include "fixtures.hpp"

using namespace psym;

namespace {

struct Analysed {
    ModelSpec spec;
    OutputSystem io;
    GeneratorBasis basis;
};

Analysed analyse(const std::string &file)
{
    Analysed a{testutil::load(file), {}, {}};
    a.io = reduce_to_io(a.spec).io;
    a.basis = solve_nullspace(build_matrix(apply_generator(a.io), a.io.parameters));
    return a;
}

std::vector<double> grid(double lo, double hi, std::size_t n)
{
    std::vector<double> g;
    for (std::size_t i = 0; i < n; ++i) {
        g.push_back(lo + (hi - lo) * double(i) / double(n - 1));
    }
    return g;
}

// u + v for the toy model, solved by hand.
double toy_y(double t, double k1, double k2, double l, double u0, double v0)
{
    double s = (k1 + k2) / l;
    return s + (u0 + v0 - s) * std::exp(-l * t);
}

SimulationConfig config_for(const ModelSpec &spec)
{
    SimulationConfig cfg;
    for (std::size_t i = 0; i < spec.states.size(); ++i) {
        cfg.initial_states.push_back(0.3 + 0.2 * double(i));
    }
    cfg.time_grid = grid(0, 3, 31);
    for (auto u : spec.inputs) {
        cfg.inputs[u.name()] = Signal::sine(1, 1.3);
    }
    return cfg;
}

std::vector<double> generic_theta(const ModelSpec &spec)
{
    static const double pool[] = {0.7, 1.3, 0.45, 1.9, 0.85, 0.6, 1.1, 2.3, 0.35};
    std::vector<double> th;
    for (std::size_t i = 0; i < spec.parameters.size(); ++i) {
        th.push_back(pool[i % 9]);
    }
    return th;
}

bool same_set(std::vector<RationalFunction> a, std::vector<RationalFunction> b)
{
    if (a.size() != b.size()) {
        return false;
    }
    for (const auto &x : a) {
        if (std::find(b.begin(), b.end(), x) == b.end()) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("signal catalog")
{
    // Derivatives against central differences.
    const double t = 0.7, h = 1e-4;
    for (Signal s : {Signal::constant(2.5), Signal::sine(1.5, 2.0), Signal::exp_decay(3.0, 0.8), Signal::zero()}) {
        for (unsigned k = 0; k < 4; ++k) {
            double fd = (s.jet(t + h, k) - s.jet(t - h, k)) / (2 * h);
            CHECK(s.jet(t, k + 1) == doctest::Approx(fd).epsilon(1e-6));
        }
        Signal back = Signal::parse(s.str());
        CHECK(back.kind == s.kind);
        CHECK(back.a == s.a);
        CHECK(back.rate == s.rate);
    }
    CHECK(Signal::sine(2, 3).jet(0.25, 0) == 2 * std::sin(0.75));
    CHECK(Signal::parse(" sine( 1 , 0.5 ) ").rate == 0.5);
    CHECK_THROWS_AS(Signal::parse("cosine(1,1)"), InvalidArgument);
    CHECK_THROWS_AS(Signal::parse("sine(1)"), InvalidArgument);
    CHECK_THROWS_AS(Signal::parse("constant(x)"), InvalidArgument);
    CHECK_THROWS_AS(Signal::parse("constant(1"), InvalidArgument);
}

TEST_CASE("toy simulation against its closed form")
{
    ModelSpec toy = testutil::load("toy.psym");
    SimulationConfig cfg;
    cfg.initial_states = {0, 0};
    cfg.time_grid = grid(0, 10, 101);
    Simulation sim = simulate(toy, {1, 1, 1}, cfg, {{"y", 2}});
    for (std::size_t i = 0; i < sim.times.size(); ++i) {
        CHECK(sim.outputs[i][0] == doctest::Approx(toy_y(sim.times[i], 1, 1, 1, 0, 0)).epsilon(1e-11));
    }
    CHECK(sim.outputs.back()[0] == doctest::Approx(2).epsilon(1e-4));

    // Jets: y' = k1 + k2 - l*y and y'' = -l*y'.
    for (std::size_t i = 0; i < sim.times.size(); i += 10) {
        CHECK(sim.jets[i][1] == doctest::Approx(2 - sim.jets[i][0]).epsilon(1e-14));
        CHECK(sim.jets[i][2] == doctest::Approx(-sim.jets[i][1]).epsilon(1e-14));
    }
    CHECK(sim.jet_variables.back() == Variable::time());
}

TEST_CASE("RK4 convergence under step halving")
{
    ModelSpec toy = testutil::load("toy.psym");
    SimulationConfig cfg;
    cfg.initial_states = {0.2, 1.6};
    cfg.time_grid = grid(0, 4, 9);
    auto err = [&](double step) {
        cfg.step = step;
        Simulation sim = simulate(toy, {1.2, 0.5, 1.7}, cfg);
        double e = 0;
        for (std::size_t i = 0; i < sim.times.size(); ++i) {
            e = std::max(e, std::fabs(sim.outputs[i][0] - toy_y(sim.times[i], 1.2, 0.5, 1.7, 0.2, 1.6)));
        }
        return e;
    };
    double ratio = err(0.1) / err(0.05);
    CHECK(ratio > 14);
    CHECK(ratio < 18);
}

TEST_CASE("simulation edge cases")
{
    ModelSpec still = load_model("model still\nstates x\nparams a\nodes\n  x' = 0\noutputs\n  y = a*x\nend\n");
    SimulationConfig cfg;
    cfg.initial_states = {0.75};
    cfg.time_grid = grid(0, 1, 5);
    Simulation sim = simulate(still, {2}, cfg);
    for (const auto &row : sim.outputs) {
        CHECK(row[0] == 1.5);
    }

    ModelSpec g = testutil::load("glucose.psym");
    SimulationConfig gc = config_for(g);
    gc.time_grid = grid(0, 10, 21);
    gc.step = 0.02;
    Simulation coarse = simulate(g, generic_theta(g), gc);
    gc.step = 0.01;
    Simulation fine = simulate(g, generic_theta(g), gc);
    for (std::size_t i = 0; i < fine.times.size(); ++i) {
        CHECK(std::isfinite(fine.outputs[i][0]));
        CHECK(coarse.outputs[i][0] == doctest::Approx(fine.outputs[i][0]).epsilon(1e-6));
    }

    CHECK_THROWS_AS(simulate(g, generic_theta(g), SimulationConfig{{1}, {0, 1}, gc.inputs}), InvalidArgument);
    CHECK_THROWS_AS(simulate(g, {1, 2}, gc), InvalidArgument);
    SimulationConfig unbound = gc;
    unbound.inputs.clear();
    CHECK_THROWS_AS(simulate(g, generic_theta(g), unbound), InvalidArgument);
    SimulationConfig bad = gc;
    bad.time_grid = {0, 1, 1};
    CHECK_THROWS_AS(simulate(g, generic_theta(g), bad), InvalidArgument);

    ModelSpec pole = load_model("model pole\nstates x\nparams a\nodes\n  x' = a/x\noutputs\n  y = x\nend\n");
    CHECK_THROWS_AS(simulate(pole, {1}, SimulationConfig{{0}, {0, 1}, {}}), PoleOnTrajectory);
    ModelSpec blow = load_model("model blow\nstates x\nparams a\nodes\n  x' = a*x^2\noutputs\n  y = x\nend\n");
    CHECK_THROWS_AS(simulate(blow, {1}, SimulationConfig{{1}, {0, 2}, {}}), BlowUp);

    std::string csv = simulation_csv(sim, still, 4);
    CHECK(csv.rfind("t,x,y,traj_id\n0,0.75,1.5,4\n", 0) == 0);
}

TEST_CASE("toy residuals")
{
    Analysed a = analyse("toy.psym");
    SimulationConfig cfg = config_for(a.spec);
    std::vector<double> th{1.1, 0.9, 0.8};
    auto sym = residual_check(a.io, a.spec, th, {1.4, 0.6, 0.8}, cfg);
    CHECK(sym.max_abs_residual <= 1e-8);
    CHECK(sym.outcome == Outcome::Pass);
    CHECK(sym.profile.size() == a.io.equations.size());
    CHECK(sym.profile[0].size() == cfg.time_grid.size());
    CHECK(residual_check(a.io, a.spec, th, th, cfg).max_abs_residual <= 1e-10);
    auto broken = residual_check(a.io, a.spec, th, {1.1, 0.9, 0.9}, cfg);
    CHECK(broken.max_abs_residual >= 1e-3);
    CHECK(broken.outcome == Outcome::Fail);
    CHECK(classify_residual(1e-5) == Outcome::Inconclusive);
    CHECK_THROWS_AS(residual_check(a.io, a.spec, th, {1, 2}, cfg), InvalidArgument);

    // Re-simulating the output equation tells the same story.
    CHECK(resimulate_outputs(a.io, a.spec, th, {1.4, 0.6, 0.8}, cfg).outcome == Outcome::Pass);
    CHECK(resimulate_outputs(a.io, a.spec, th, {1.1, 0.9, 0.9}, cfg).outcome == Outcome::Fail);
}

TEST_CASE("property: detection power on all models")
{
    for (const char *file : {"toy.psym", "glucose.psym", "sei.psym"}) {
        CAPTURE(file);
        Analysed a = analyse(file);
        SimulationConfig cfg = config_for(a.spec);
        auto th = generic_theta(a.spec);
        for (auto p : zero_infinitesimal_params(a.basis)) {
            auto hat = th;
            hat[*a.spec.parameter_index(p)] *= 1.1;
            CHECK(residual_check(a.io, a.spec, th, hat, cfg).max_abs_residual >= 1e-3);
        }
        for (std::size_t k = 0; k < a.basis.dimension(); ++k) {
            std::vector<BigRational> alpha(a.basis.dimension(), BigRational(0));
            alpha[k] = 1;
            GeneratorInstance inst(a.basis, alpha);
            for (double eps : {-0.2, 0.15}) {
                auto hat = flowed_parameters(inst, th, eps, {false});
                CHECK(hat != th);
                CHECK(residual_check(a.io, a.spec, th, hat, cfg).max_abs_residual <= 1e-8);
            }
        }
    }
}

TEST_CASE("coefficient extraction")
{
    Analysed toy = analyse("toy.psym");
    CHECK(same_set(da_extract(toy.io), {testutil::expr(toy.spec, "lambda"), testutil::expr(toy.spec, "kappa1 + kappa2")}));
    Analysed g = analyse("glucose.psym");
    CHECK(same_set(da_extract(g.io), {testutil::expr(g.spec, "p1 + p3"), testutil::expr(g.spec, "p1*p3 + p2*p4"),
                                      testutil::expr(g.spec, "p3/Vp"), testutil::expr(g.spec, "1/Vp")}));
    ModelSpec free = load_model("model free\nstates x\nparams a\nodes\n  x' = -x\noutputs\n  y = x\nend\n");
    auto io = reduce_to_io(free).io;
    CHECK(da_extract(io).empty());
}

TEST_CASE("cross-check against the invariants")
{
    for (const char *file : {"toy.psym", "glucose.psym", "sei.psym"}) {
        CAPTURE(file);
        Analysed a = analyse(file);
        InvariantReport rep = invariant_report(a.basis);
        CHECK(cross_check(da_extract(a.io), rep, a.basis));
    }
    Analysed g = analyse("glucose.psym");
    InvariantReport rep = invariant_report(g.basis);
    GeneratorBasis bad = g.basis;
    std::vector<RationalFunction> unit(bad.parameters.size(), RationalFunction(0));
    unit[1] = 1;
    bad.vectors.push_back(unit);
    CHECK_FALSE(cross_check(da_extract(g.io), rep, bad));
    // Dropping a coefficient loses information.
    auto da = da_extract(g.io);
    da.pop_back();
    CHECK_FALSE(cross_check(da, rep, g.basis));
}
