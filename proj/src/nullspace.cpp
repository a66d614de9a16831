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

#include <psym/nullspace.hpp>

#include <psym/linalg.hpp>

namespace psym {

namespace {

PolyMatrix entries_of(const ConditionMatrix &m)
{
    PolyMatrix a;
    a.reserve(m.rows.size());
    for (const auto &r : m.rows) {
        a.push_back(r.entries);
    }
    return a;
}

// Clears denominators row by row so elimination runs over the polynomial ring.
PolyMatrix cleared(const std::vector<std::vector<RationalFunction>> &vs)
{
    PolyMatrix a;
    for (const auto &v : vs) {
        a.push_back(canonical_vector(v));
    }
    return a;
}

} // namespace

std::size_t rank_at_random_points(const ConditionMatrix &m, int trials, std::mt19937_64 &rng)
{
    if (trials < 1) {
        throw InvalidArgument("rank_at_random_points needs at least one trial");
    }
    std::size_t best = 0;
    for (int t = 0; t < trials; ++t) {
        Assignment pt = random_point(m.columns, rng);
        QMatrix q;
        for (const auto &r : m.rows) {
            std::vector<BigRational> row;
            for (const auto &e : r.entries) {
                row.push_back(e.evaluate(pt));
            }
            q.push_back(std::move(row));
        }
        best = std::max(best, rank_q(std::move(q)));
    }
    return best;
}

GeneratorBasis solve_nullspace(const ConditionMatrix &m, std::uint64_t seed)
{
    const std::size_t p = m.columns.size();
    GeneratorBasis out;
    out.parameters = m.columns;

    Echelon e = bareiss(entries_of(m), p, true);
    std::mt19937_64 rng(seed);
    std::size_t numeric = rank_at_random_points(m, 10, rng);
    if (numeric != e.pivots.size()) {
        throw SymbolicRankMismatch("symbolic rank " + std::to_string(e.pivots.size()) + " but rank " +
                                   std::to_string(numeric) + " at random points");
    }

    std::vector<bool> is_pivot(p, false);
    for (auto c : e.pivots) {
        is_pivot[c] = true;
    }
    for (std::size_t f = 0; f < p; ++f) {
        if (is_pivot[f]) {
            continue;
        }
        // In the reduced form each pivot row reads d*x[pc] + row[f]*x[f] = 0.
        std::vector<RationalFunction> x(p);
        x[f] = e.pivots.empty() ? RationalFunction(1) : RationalFunction(e.rows.back()[e.pivots.back()]);
        for (std::size_t i = 0; i < e.pivots.size(); ++i) {
            x[e.pivots[i]] = -RationalFunction(e.rows[i][f]);
        }
        std::vector<RationalFunction> v;
        for (auto &c : canonical_vector(x)) {
            v.emplace_back(std::move(c));
        }
        out.vectors.push_back(std::move(v));
    }
    if (!annihilates(out, m)) {
        throw Error("internal: null-space vector does not annihilate the condition matrix");
    }
    return out;
}

bool annihilates(const GeneratorBasis &b, const ConditionMatrix &m)
{
    for (const auto &v : b.vectors) {
        for (const auto &r : m.rows) {
            RationalFunction dot;
            for (std::size_t l = 0; l < v.size(); ++l) {
                if (!r.entries[l].is_zero() && !v[l].is_zero()) {
                    dot += RationalFunction(r.entries[l]) * v[l];
                }
            }
            if (!dot.is_zero()) {
                return false;
            }
        }
    }
    return true;
}

std::size_t symbolic_rank(const std::vector<std::vector<RationalFunction>> &vectors)
{
    if (vectors.empty()) {
        return 0;
    }
    return bareiss(cleared(vectors), vectors[0].size()).pivots.size();
}

bool same_span(const std::vector<std::vector<RationalFunction>> &a, const std::vector<std::vector<RationalFunction>> &b)
{
    auto both = a;
    both.insert(both.end(), b.begin(), b.end());
    std::size_t r = symbolic_rank(both);
    return r == symbolic_rank(a) && r == symbolic_rank(b);
}

std::string generator_string(const GeneratorBasis &b, std::size_t k)
{
    std::string out;
    const auto &v = b.vectors.at(k);
    for (std::size_t l = 0; l < v.size(); ++l) {
        if (v[l].is_zero()) {
            continue;
        }
        std::string c = v[l].str();
        bool neg = false;
        if (v[l].is_constant()) {
            BigRational q = v[l].constant_value();
            neg = q < 0;
            c = to_string(neg ? BigRational(-q) : q);
        } else if (v[l].term_count() > 2 || !v[l].is_polynomial()) {
            c = "(" + c + ")";
        } else if (c.front() == '-') {
            neg = true;
            c = c.substr(1);
        }
        if (out.empty()) {
            out = neg ? "-" : "";
        } else {
            out += neg ? " - " : " + ";
        }
        std::string d = "d/d" + b.parameters[l].name();
        out += (c == "1") ? d : c + "*" + d;
    }
    return out.empty() ? "0" : out;
}

} // namespace psym
