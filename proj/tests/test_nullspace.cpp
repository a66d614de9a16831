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

#include <psym/nullspace.hpp>

#include "fixtures.hpp"
#include "qrank.hpp"
#include "random_exprs.hpp"

using namespace psym;

namespace {

GeneratorBasis basis_of(const ModelSpec &spec, Restriction mode = Restriction::OnSolution)
{
    OutputSystem io = reduce_to_io(spec).io;
    return solve_nullspace(build_matrix(apply_generator(io, mode), io.parameters));
}

std::vector<RationalFunction> vec(const ModelSpec &spec, std::initializer_list<const char *> xs)
{
    std::vector<RationalFunction> out;
    for (const char *x : xs) {
        out.push_back(testutil::expr(spec, x));
    }
    return out;
}

} // namespace

TEST_CASE("toy basis")
{
    ModelSpec toy = testutil::load("toy.psym");
    GeneratorBasis b = basis_of(toy);
    REQUIRE(b.dimension() == 1);
    CHECK(b.vectors[0] == vec(toy, {"1", "-1", "0"}));
    CHECK(generator_string(b, 0) == "d/dkappa1 - d/dkappa2");
}

TEST_CASE("glucose basis and substitution equivalence")
{
    ModelSpec g = testutil::load("glucose.psym");
    GeneratorBasis b = basis_of(g);
    REQUIRE(b.dimension() == 1);
    CHECK(b.vectors[0] == vec(g, {"0", "p2", "0", "-p4", "0"}));
    CHECK(generator_string(b, 0) == "p2*d/dp2 - p4*d/dp4");
    // Reading every jet coefficient off X(Delta) gives the same canonical basis.
    CHECK(basis_of(g, Restriction::None) == b);
}

TEST_CASE("SEI basis spans the reference null space")
{
    ModelSpec sei = testutil::load("sei.psym");
    GeneratorBasis b = basis_of(sei);
    REQUIRE(b.dimension() == 2);
    // Parameter order (c, beta, delta, upsilon, mu_S, mu_E, mu_I, k_E, k_I).
    auto v1 = vec(sei, {"-c*upsilon", "beta", "-delta", "upsilon*(upsilon - 1)", "0", "delta", "0", "0", "k_I"});
    auto v2 = vec(sei, {"c*(upsilon - 1)", "0", "delta", "upsilon*(1 - upsilon)", "0", "-delta", "0", "k_E", "0"});
    CHECK(same_span(b.vectors, {v1, v2}));
    std::mt19937_64 rng(9);
    auto both = b.vectors;
    both.push_back(v1);
    both.push_back(v2);
    CHECK(testutil::generic_rank(both, sei.parameters, rng) == 2);
    CHECK_FALSE(same_span(b.vectors, {v1}));
    for (const auto &v : b.vectors) {
        CHECK(v[4].is_zero());
        CHECK(v[6].is_zero());
    }
}

TEST_CASE("random-point rank")
{
    std::mt19937_64 rng(2);
    ModelSpec toy = testutil::load("toy.psym");
    OutputSystem io = reduce_to_io(toy).io;
    CHECK(rank_at_random_points(build_matrix(apply_generator(io), io.parameters), 3, rng) == 2);

    ModelSpec sei = testutil::load("sei.psym");
    io = reduce_to_io(sei).io;
    CHECK(rank_at_random_points(build_matrix(apply_generator(io), io.parameters), 10, rng) == 7);

    ConditionMatrix zero;
    zero.columns = {Variable::parameter("a")};
    zero.rows.push_back({0, Monomial(), 1, {Polynomial()}});
    CHECK(rank_at_random_points(zero, 1, rng) == 0);
    CHECK(solve_nullspace(zero).dimension() == 1);
    CHECK_THROWS_AS(rank_at_random_points(zero, 0, rng), InvalidArgument);
}

TEST_CASE("property: planted-rank matrices")
{
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> dim(1, 4);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = dim(rng), p = dim(rng), r = dim(rng);
        ConditionMatrix m;
        for (std::size_t l = 0; l < p; ++l) {
            m.columns.push_back(Variable::parameter("q" + std::to_string(l)));
        }
        std::vector<std::vector<Polynomial>> left(n, std::vector<Polynomial>(r));
        std::vector<std::vector<Polynomial>> right(r, std::vector<Polynomial>(p));
        for (auto *mat : {&left, &right}) {
            for (auto &row : *mat) {
                for (auto &e : row) {
                    e = testutil::random_poly(rng, m.columns, 2, 1);
                }
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            ConditionRow row{i, Monomial(), 1, std::vector<Polynomial>(p)};
            for (std::size_t j = 0; j < p; ++j) {
                for (std::size_t k = 0; k < r; ++k) {
                    row.entries[j] += left[i][k] * right[k][j];
                }
            }
            m.rows.push_back(std::move(row));
        }
        GeneratorBasis b = solve_nullspace(m, trial);
        std::vector<std::vector<RationalFunction>> rows;
        for (const auto &row : m.rows) {
            rows.emplace_back(row.entries.begin(), row.entries.end());
        }
        std::size_t rank = testutil::generic_rank(rows, m.columns, rng);
        CHECK(b.dimension() == p - rank);
        CHECK(annihilates(b, m));
        CHECK(symbolic_rank(b.vectors) == b.dimension());
        for (const auto &v : b.vectors) {
            for (const auto &c : v) {
                CHECK(c.is_polynomial());
            }
        }
    }
}
