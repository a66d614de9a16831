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

#include <psym/linalg.hpp>

#include <psym/errors.hpp>

namespace psym {

namespace {

struct Rref {
    QMatrix rows;
    std::vector<std::size_t> pivots;
};

Rref rref(QMatrix a, std::size_t cols)
{
    Rref out;
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < a.size(); ++c) {
        std::size_t piv = row;
        while (piv < a.size() && a[piv][c] == 0) {
            ++piv;
        }
        if (piv == a.size()) {
            continue;
        }
        std::swap(a[piv], a[row]);
        BigRational inv = 1 / a[row][c];
        for (std::size_t k = c; k < cols; ++k) {
            a[row][k] *= inv;
        }
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r == row || a[r][c] == 0) {
                continue;
            }
            BigRational f = a[r][c];
            for (std::size_t k = c; k < cols; ++k) {
                if (a[row][k] != 0) {
                    a[r][k] -= f * a[row][k];
                }
            }
        }
        out.pivots.push_back(c);
        ++row;
    }
    a.resize(row);
    out.rows = std::move(a);
    return out;
}

} // namespace

std::size_t rank_q(QMatrix a)
{
    std::size_t cols = a.empty() ? 0 : a[0].size();
    return rref(std::move(a), cols).pivots.size();
}

std::vector<std::vector<BigRational>> nullspace_q(QMatrix a, std::size_t cols)
{
    Rref r = rref(std::move(a), cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : r.pivots) {
        is_pivot[p] = true;
    }
    std::vector<std::vector<BigRational>> out;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) {
            continue;
        }
        std::vector<BigRational> v(cols, BigRational(0));
        v[f] = 1;
        for (std::size_t i = 0; i < r.pivots.size(); ++i) {
            v[r.pivots[i]] = -r.rows[i][f];
        }
        out.push_back(std::move(v));
    }
    return out;
}

Echelon bareiss(PolyMatrix a, std::size_t cols, bool reduced)
{
    Echelon out;
    Polynomial prev(1);
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < a.size(); ++c) {
        std::optional<std::size_t> best;
        for (std::size_t r = row; r < a.size(); ++r) {
            const Polynomial &e = a[r][c];
            if (e.is_zero()) {
                continue;
            }
            if (!best || std::pair(e.term_count(), e.total_degree()) <
                             std::pair(a[*best][c].term_count(), a[*best][c].total_degree())) {
                best = r;
            }
        }
        if (!best) {
            continue;
        }
        std::swap(a[*best], a[row]);
        const Polynomial piv = a[row][c];
        for (std::size_t i = reduced ? 0 : row + 1; i < a.size(); ++i) {
            if (i == row) {
                continue;
            }
            const Polynomial lead = a[i][c];
            // Rows above also carry entries left of c; the pivot row is zero there.
            for (std::size_t j = (i < row ? 0 : c + 1); j < cols; ++j) {
                if (j == c) {
                    continue;
                }
                Polynomial v = piv * a[i][j];
                if (!lead.is_zero() && !a[row][j].is_zero()) {
                    v -= lead * a[row][j];
                }
                a[i][j] = v.is_zero() ? v : v.divide_exact(prev);
            }
            a[i][c] = Polynomial();
        }
        prev = piv;
        out.pivots.push_back(c);
        ++row;
    }
    a.resize(row);
    out.rows = std::move(a);
    return out;
}

Assignment random_point(const std::vector<Variable> &vars, std::mt19937_64 &rng)
{
    std::uniform_int_distribution<long> num(1, 1000), den(1, 97);
    Assignment pt;
    for (auto v : vars) {
        BigRational q(num(rng), den(rng));
        q.canonicalize();
        pt[v] = q;
    }
    return pt;
}

std::vector<BigRational> integer_vector(std::vector<BigRational> v)
{
    mpz_class g = 0, l = 1;
    for (const auto &x : v) {
        if (x != 0) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_num_mpz_t());
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
        }
    }
    if (g == 0) {
        return v;
    }
    BigRational scale(l, g);
    scale.canonicalize();
    for (const auto &x : v) {
        if (x != 0) {
            if (x < 0) {
                scale = -scale;
            }
            break;
        }
    }
    for (auto &x : v) {
        x *= scale;
    }
    return v;
}

std::vector<Polynomial> canonical_vector(const std::vector<RationalFunction> &v)
{
    Polynomial l(1);
    for (const auto &x : v) {
        if (!x.is_zero()) {
            l = lcm(l, x.denominator());
        }
    }
    std::vector<Polynomial> out;
    Polynomial g;
    for (const auto &x : v) {
        if (x.is_zero()) {
            out.emplace_back();
            continue;
        }
        out.push_back(x.numerator() * l.divide_exact(x.denominator()));
        g = gcd(g, out.back());
    }
    if (g.is_zero()) {
        return out;
    }
    for (auto &p : out) {
        if (!p.is_zero()) {
            p = p.divide_exact(g);
        }
    }
    // Rational content across all components, sign from the first nonzero.
    mpz_class num = 0, den = 1;
    for (const auto &p : out) {
        for (const auto &t : p.terms()) {
            mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.coeff.get_num_mpz_t());
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coeff.get_den_mpz_t());
        }
    }
    BigRational scale(den, num);
    scale.canonicalize();
    for (const auto &p : out) {
        if (!p.is_zero()) {
            if (p.leading_coeff() < 0) {
                scale = -scale;
            }
            break;
        }
    }
    for (auto &p : out) {
        p = p.scaled(scale);
    }
    return out;
}

} // namespace psym
