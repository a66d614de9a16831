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

#include <psym/invariants.hpp>

#include "fixtures.hpp"
#include "qrank.hpp"
#include "random_exprs.hpp"

using namespace psym;

namespace {

struct Pipeline {
    ModelSpec spec;
    OutputSystem io;
    GeneratorBasis basis;
};

Pipeline run(const char *name)
{
    Pipeline p{testutil::load(name), {}, {}};
    p.io = reduce_to_io(p.spec).io;
    p.basis = solve_nullspace(build_matrix(apply_generator(p.io), p.io.parameters));
    return p;
}

std::vector<RationalFunction> exprs(const ModelSpec &spec, std::initializer_list<const char *> xs)
{
    std::vector<RationalFunction> out;
    for (const char *x : xs) {
        out.push_back(testutil::expr(spec, x));
    }
    return out;
}

bool same_set(std::vector<RationalFunction> a, std::vector<RationalFunction> b)
{
    if (a.size() != b.size()) {
        return false;
    }
    for (const auto &x : a) {
        auto it = std::find(b.begin(), b.end(), x);
        if (it == b.end()) {
            return false;
        }
        b.erase(it);
    }
    return true;
}

std::string joined(const std::vector<RationalFunction> &fs)
{
    std::string s;
    for (const auto &f : fs) {
        s += invariant_string(f) + "; ";
    }
    return s;
}

// Test-side Jacobian rank: symbolic partials, exact rank at random points.
std::size_t oracle_rank(const std::vector<RationalFunction> &fs, const std::vector<Variable> &params)
{
    std::vector<std::vector<RationalFunction>> jac;
    for (const auto &f : fs) {
        std::vector<RationalFunction> row;
        for (auto p : params) {
            row.push_back(f.derivative(p));
        }
        jac.push_back(std::move(row));
    }
    std::mt19937_64 rng(1234);
    return testutil::generic_rank(jac, params, rng, 3);
}

} // namespace

TEST_CASE("apply_to examples")
{
    Pipeline toy = run("toy.psym");
    CHECK(apply_to(testutil::expr(toy.spec, "kappa1 + kappa2"), toy.basis) == std::vector<RationalFunction>{RationalFunction()});
    Pipeline g = run("glucose.psym");
    auto r = apply_to(testutil::expr(g.spec, "p2"), g.basis);
    REQUIRE(r.size() == 1);
    CHECK(r[0] == testutil::expr(g.spec, "p2"));
    GeneratorBasis empty{toy.basis.parameters, {}};
    CHECK(apply_to(testutil::expr(toy.spec, "lambda"), empty).empty());
}

TEST_CASE("zero infinitesimal parameters")
{
    auto names = [](const std::vector<Variable> &vs) {
        std::vector<std::string> out;
        for (auto v : vs) {
            out.push_back(v.name());
        }
        return out;
    };
    CHECK(names(zero_infinitesimal_params(run("toy.psym").basis)) == std::vector<std::string>{"lambda"});
    CHECK(names(zero_infinitesimal_params(run("glucose.psym").basis)) == std::vector<std::string>{"p1", "p3", "Vp"});
    CHECK(names(zero_infinitesimal_params(run("sei.psym").basis)) == std::vector<std::string>{"mu_S", "mu_I"});
}

TEST_CASE("presentation of invariants")
{
    ModelSpec sei = testutil::load("sei.psym");
    auto pres = [&](const char *x) { return present_invariant(testutil::expr(sei, x), sei.parameters); };
    CHECK(pres("-2*c - 2*beta") == testutil::expr(sei, "c + beta"));
    CHECK(pres("k_E/(beta*delta)") == testutil::expr(sei, "beta*delta/k_E"));
    CHECK(pres("3/(delta + mu_E)") == testutil::expr(sei, "delta + mu_E"));
    CHECK(pres("k_I/beta") == testutil::expr(sei, "beta/k_I"));
    CHECK(pres("-2*upsilon/(delta*upsilon - delta)") == testutil::expr(sei, "upsilon/(delta*(1 - upsilon))"));
    CHECK(invariant_string(testutil::expr(sei, "upsilon/(delta*(1 - upsilon))")) == "upsilon/(-delta*upsilon + delta)");
}

TEST_CASE("toy invariants")
{
    Pipeline p = run("toy.psym");
    auto invs = find_invariants(p.basis);
    CHECK_MESSAGE(same_set(invs, exprs(p.spec, {"lambda", "kappa1 + kappa2"})), joined(invs));
}

TEST_CASE("glucose invariants")
{
    Pipeline p = run("glucose.psym");
    auto invs = find_invariants(p.basis);
    CHECK_MESSAGE(same_set(invs, exprs(p.spec, {"p1", "p3", "Vp", "p2*p4"})), joined(invs));
    CHECK(certify_independence(invs, p.basis, 4) == 4);
    CHECK(oracle_rank(invs, p.spec.parameters) == 4);
}

TEST_CASE("SEI invariants")
{
    Pipeline p = run("sei.psym");
    auto invs = find_invariants(p.basis);
    auto expected = exprs(p.spec, {"mu_I", "mu_S", "delta + mu_E", "beta/k_I", "upsilon/(delta*(1 - upsilon))",
                                   "beta*c*upsilon", "beta*delta/k_E"});
    CHECK_MESSAGE(same_set(invs, expected), joined(invs));
    CHECK(certify_independence(invs, p.basis, 7) == 7);
    CHECK(oracle_rank(expected, p.spec.parameters) == 7);

    InvariantReport r = invariant_report(p.basis);
    CHECK(r.model_verdict == Verdict::Unidentifiable);
    CHECK_FALSE(r.incomplete);
    CHECK(r.expected_rank == 7);
    for (const auto &[param, verdict] : r.verdicts) {
        bool direct = param.name() == "mu_S" || param.name() == "mu_I";
        CHECK(verdict == (direct ? Verdict::Identifiable : Verdict::Unidentifiable));
    }
}

TEST_CASE("certificate edge cases")
{
    Variable th = Variable::parameter("theta1");
    GeneratorBasis empty{{th}, {}};
    CHECK(certify_independence({RationalFunction(th)}, empty, 1) == 1);
    InvariantReport r = invariant_report(empty);
    CHECK(r.model_verdict == Verdict::Identifiable);
    CHECK(r.invariants == std::vector<RationalFunction>{RationalFunction(th)});

    Pipeline g = run("glucose.psym");
    CHECK_THROWS_AS(certify_independence({testutil::expr(g.spec, "p2")}, g.basis, 1), InvalidArgument);
    // Dropping an invariant is reported as an incomplete set by the caller.
    auto invs = exprs(g.spec, {"p1", "p3", "Vp"});
    CHECK(certify_independence(invs, g.basis, 4) == 3);
}

TEST_CASE("monic coefficients and the functional-dependence check")
{
    Pipeline toy = run("toy.psym");
    CHECK(same_set(monic_coefficients(toy.io), exprs(toy.spec, {"lambda", "kappa1 + kappa2"})));
    Pipeline g = run("glucose.psym");
    CHECK(same_set(monic_coefficients(g.io), exprs(g.spec, {"p1 + p3", "p1*p3 + p2*p4", "p3/Vp", "1/Vp"})));

    for (auto *p : {&toy, &g}) {
        CHECK(function_of_invariants_check(p->io, find_invariants(p->basis), p->basis));
    }
    Pipeline sei = run("sei.psym");
    CHECK(function_of_invariants_check(sei.io, find_invariants(sei.basis), sei.basis));

    OutputSystem bad = load_io("lead y 1\ny' - p2*y = 0\n", g.spec);
    CHECK_FALSE(function_of_invariants_check(bad, find_invariants(g.basis), g.basis));
}

TEST_CASE("property: functions of invariants are invariant")
{
    Pipeline sei = run("sei.psym");
    auto invs = find_invariants(sei.basis);
    REQUIRE(invs.size() == 7);
    std::mt19937_64 rng(101);
    Variable a = Variable::parameter("a"), b = Variable::parameter("b");
    std::uniform_int_distribution<std::size_t> pick(0, invs.size() - 1);
    for (int trial = 0; trial < 100; ++trial) {
        RationalFunction f = testutil::random_rf(rng, {a, b});
        std::size_t i = pick(rng), j = pick(rng);
        RationalFunction composed = f.substitute({{a, invs[i]}, {b, invs[j]}});
        for (const auto &r : apply_to(composed, sei.basis)) {
            CHECK(r.is_zero());
        }
    }
}
