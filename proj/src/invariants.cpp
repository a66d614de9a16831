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

#include <psym/invariants.hpp>

#include <psym/linalg.hpp>

namespace psym {

namespace {

// Basis vectors with denominators cleared; rescaling a generator by a
// nonzero function does not change what it annihilates.
std::vector<std::vector<Polynomial>> polynomial_generators(const GeneratorBasis &basis)
{
    std::vector<std::vector<Polynomial>> out;
    for (const auto &v : basis.vectors) {
        out.push_back(canonical_vector(v));
    }
    return out;
}

Polynomial act(const std::vector<Polynomial> &gen, const std::vector<Variable> &params, const Polynomial &p)
{
    Polynomial acc;
    for (std::size_t l = 0; l < params.size(); ++l) {
        if (gen[l].is_zero()) {
            continue;
        }
        Polynomial d = p.derivative(params[l]);
        if (!d.is_zero()) {
            acc += gen[l] * d;
        }
    }
    return acc;
}

// Appends the rows of sum_i a_i * contrib[i] == 0, one per monomial.
void append_rows(QMatrix &rows, const std::vector<Polynomial> &contrib)
{
    std::map<Monomial, std::vector<BigRational>> by_mono;
    for (std::size_t i = 0; i < contrib.size(); ++i) {
        for (const auto &t : contrib[i].terms()) {
            auto &row = by_mono[t.mono];
            if (row.empty()) {
                row.assign(contrib.size(), BigRational(0));
            }
            row[i] += t.coeff;
        }
    }
    for (auto &[m, row] : by_mono) {
        rows.push_back(std::move(row));
    }
}

void monomials_upto(const std::vector<Variable> &vars, std::size_t from, unsigned degree, Monomial current,
                    std::vector<Monomial> &out)
{
    out.push_back(current);
    if (degree == 0) {
        return;
    }
    for (std::size_t i = from; i < vars.size(); ++i) {
        monomials_upto(vars, i, degree - 1, current * Monomial::of(vars[i]), out);
    }
}

Polynomial trailing_positive(Polynomial p)
{
    p = p.primitive_part();
    if (!p.is_zero() && p.terms().back().coeff < 0) {
        p = -p;
    }
    return p;
}

// Denominator dictionary: free parameters plus the non-monomial factors of
// the infinitesimals, split along pairwise gcds.
std::vector<Polynomial> denominator_factors(const std::vector<std::vector<Polynomial>> &gens,
                                            const std::vector<Variable> &free)
{
    std::vector<Polynomial> rest;
    auto add = [&](Polynomial q) {
        q = trailing_positive(q);
        if (q.is_constant()) {
            return;
        }
        for (const auto &r : rest) {
            if (r == q) {
                return;
            }
        }
        rest.push_back(std::move(q));
    };
    for (const auto &g : gens) {
        for (const auto &c : g) {
            if (!c.is_zero()) {
                add(c.divided_by_monomial(c.monomial_content()));
            }
        }
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < rest.size() && !changed; ++i) {
            for (std::size_t j = i + 1; j < rest.size() && !changed; ++j) {
                Polynomial g = gcd(rest[i], rest[j]);
                if (g.is_constant()) {
                    continue;
                }
                Polynomial a = rest[i].divide_exact(g), b = rest[j].divide_exact(g);
                rest.erase(rest.begin() + j);
                rest.erase(rest.begin() + i);
                add(g);
                add(a);
                add(b);
                changed = true;
            }
        }
    }
    std::vector<Polynomial> out;
    for (auto v : free) {
        out.emplace_back(v);
    }
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

void products_upto(const std::vector<Polynomial> &factors, std::size_t from, unsigned left, const Polynomial &current,
                   std::vector<Polynomial> &out)
{
    if (left == 0) {
        return;
    }
    for (std::size_t i = from; i < factors.size(); ++i) {
        Polynomial next = current * factors[i];
        out.push_back(next);
        products_upto(factors, i, left - 1, next, out);
    }
}

struct Search {
    const GeneratorBasis &basis;
    std::vector<std::vector<Polynomial>> gens;
    std::size_t target;
    std::mt19937_64 rng;
    std::vector<RationalFunction> found;

    bool done() const { return found.size() >= target; }

    void accept(const RationalFunction &cand)
    {
        if (done() || cand.is_constant()) {
            return;
        }
        for (const auto &r : apply_to(cand, basis)) {
            if (!r.is_zero()) {
                return;
            }
        }
        RationalFunction f = present_invariant(cand, basis.parameters);
        auto trial = found;
        trial.push_back(f);
        if (jacobian_rank(trial, basis.parameters, 3, rng, trial.size()) == trial.size()) {
            found.push_back(std::move(f));
        }
    }
};

std::size_t first_nonzero_net_degree_sign(const Polynomial &n, const Polynomial &d, const std::vector<Variable> &params,
                                          int &sign)
{
    for (std::size_t l = 0; l < params.size(); ++l) {
        long net = long(n.degree_in(params[l])) - long(d.degree_in(params[l]));
        if (net != 0) {
            sign = net > 0 ? 1 : -1;
            return l;
        }
    }
    sign = 0;
    return params.size();
}

} // namespace

const char *to_string(Verdict v) { return v == Verdict::Identifiable ? "identifiable" : "unidentifiable"; }

std::vector<RationalFunction> apply_to(const RationalFunction &candidate, const GeneratorBasis &basis)
{
    std::vector<RationalFunction> out;
    for (const auto &v : basis.vectors) {
        RationalFunction acc;
        for (std::size_t l = 0; l < basis.parameters.size(); ++l) {
            if (v[l].is_zero()) {
                continue;
            }
            RationalFunction d = candidate.derivative(basis.parameters[l]);
            if (!d.is_zero()) {
                acc += v[l] * d;
            }
        }
        out.push_back(std::move(acc));
    }
    return out;
}

std::vector<Variable> zero_infinitesimal_params(const GeneratorBasis &basis)
{
    std::vector<Variable> out;
    for (std::size_t l = 0; l < basis.parameters.size(); ++l) {
        bool zero = true;
        for (const auto &v : basis.vectors) {
            zero = zero && v[l].is_zero();
        }
        if (zero) {
            out.push_back(basis.parameters[l]);
        }
    }
    return out;
}

RationalFunction present_invariant(const RationalFunction &f, const std::vector<Variable> &parameters)
{
    Polynomial n = f.numerator(), d = f.denominator();
    if (!d.is_constant()) {
        bool flip = n.is_constant();
        if (!flip && n.term_count() != d.term_count()) {
            flip = n.term_count() > d.term_count();
        } else if (!flip) {
            int sign = 0;
            first_nonzero_net_degree_sign(n, d, parameters, sign);
            flip = sign < 0;
        }
        if (flip) {
            std::swap(n, d);
        }
    }
    return RationalFunction(n.primitive_part(), trailing_positive(d));
}

std::string invariant_string(const RationalFunction &f)
{
    if (f.is_polynomial()) {
        return f.str();
    }
    // Same value, written over the trailing-positive denominator.
    Polynomial n = f.numerator(), d = f.denominator();
    if (d.terms().back().coeff < 0) {
        n = -n;
        d = -d;
    }
    std::string ns = n.str(), ds = d.str();
    if (n.term_count() > 1) {
        ns = "(" + ns + ")";
    }
    if (d.term_count() > 1 || ds.find('*') != std::string::npos || ds.find('^') != std::string::npos) {
        ds = "(" + ds + ")";
    }
    return ns + "/" + ds;
}

std::size_t jacobian_rank(const std::vector<RationalFunction> &fs, const std::vector<Variable> &params, int trials,
                          std::mt19937_64 &rng, std::size_t stop_at)
{
    std::vector<std::vector<RationalFunction>> jac;
    for (const auto &f : fs) {
        std::vector<RationalFunction> row;
        for (auto p : params) {
            row.push_back(f.derivative(p));
        }
        jac.push_back(std::move(row));
    }
    std::size_t best = 0;
    for (int t = 0; t < trials && best < stop_at; ++t) {
        for (int retry = 0; retry < 8; ++retry) {
            Assignment pt = random_point(params, rng);
            try {
                QMatrix q;
                for (const auto &row : jac) {
                    std::vector<BigRational> r;
                    for (const auto &e : row) {
                        r.push_back(e.evaluate(pt));
                    }
                    q.push_back(std::move(r));
                }
                best = std::max(best, rank_q(std::move(q)));
                break;
            } catch (const PoleAtPoint &) {
            }
        }
    }
    return best;
}

std::vector<RationalFunction> find_invariants(const GeneratorBasis &basis, const AnsatzConfig &config)
{
    const auto &params = basis.parameters;
    Search s{basis, polynomial_generators(basis), params.size() - std::min(params.size(), basis.dimension()),
             std::mt19937_64(config.seed), {}};

    // (a) parameters every generator leaves fixed.
    auto fixed = zero_infinitesimal_params(basis);
    for (auto v : fixed) {
        s.accept(RationalFunction(v));
    }
    std::vector<Variable> free;
    std::vector<std::size_t> free_index;
    for (std::size_t l = 0; l < params.size(); ++l) {
        if (std::find(fixed.begin(), fixed.end(), params[l]) == fixed.end()) {
            free.push_back(params[l]);
            free_index.push_back(l);
        }
    }
    if (s.done() || free.empty()) {
        return s.found;
    }

    // (b) linear forms: sum_l c_l chi_l == 0 for every generator.
    {
        QMatrix rows;
        for (const auto &g : s.gens) {
            std::vector<Polynomial> contrib;
            for (auto l : free_index) {
                contrib.push_back(g[l]);
            }
            append_rows(rows, contrib);
        }
        for (const auto &c : nullspace_q(std::move(rows), free.size())) {
            auto ci = integer_vector(c);
            Polynomial p;
            for (std::size_t i = 0; i < free.size(); ++i) {
                if (ci[i] != 0) {
                    p += Polynomial(free[i]).scaled(ci[i]);
                }
            }
            s.accept(RationalFunction(p));
        }
    }
    if (s.done()) {
        return s.found;
    }

    // (c) monomials: sum_l a_l chi_l / theta_l == 0, cleared by prod theta.
    {
        QMatrix rows;
        Monomial all;
        for (auto v : free) {
            all = all * Monomial::of(v);
        }
        for (const auto &g : s.gens) {
            std::vector<Polynomial> contrib;
            for (std::size_t i = 0; i < free.size(); ++i) {
                contrib.push_back(g[free_index[i]].times_monomial(all.without(free[i])));
            }
            append_rows(rows, contrib);
        }
        for (const auto &a : nullspace_q(std::move(rows), free.size())) {
            auto ai = integer_vector(a);
            std::vector<VarPower> up, down;
            for (std::size_t i = 0; i < free.size(); ++i) {
                long e = ai[i].get_num().get_si();
                if (e > 0) {
                    up.push_back({free[i], std::uint32_t(e)});
                } else if (e < 0) {
                    down.push_back({free[i], std::uint32_t(-e)});
                }
            }
            s.accept(RationalFunction(Polynomial(BigRational(1), Monomial::from_powers(up)),
                                      Polynomial(BigRational(1), Monomial::from_powers(down))));
        }
    }
    if (s.done()) {
        return s.found;
    }

    // (d) P/Q with Q from the dictionary and P of bounded degree, solved from
    // Q*X(P) - P*X(Q) == 0.
    auto factors = denominator_factors(s.gens, free);
    std::vector<Polynomial> qs{Polynomial(1)};
    products_upto(factors, 0, config.max_den_factors, Polynomial(1), qs);
    for (unsigned d = 1; d <= config.max_num_degree && !s.done(); ++d) {
        std::vector<Monomial> monos;
        monomials_upto(free, 0, d, Monomial(), monos);
        for (const auto &q : qs) {
            if (s.done()) {
                break;
            }
            QMatrix rows;
            for (const auto &g : s.gens) {
                Polynomial xq = act(g, params, q);
                std::vector<Polynomial> contrib;
                for (const auto &m : monos) {
                    Polynomial pm(BigRational(1), m);
                    Polynomial c = q * act(g, params, pm);
                    if (!xq.is_zero()) {
                        c -= pm * xq;
                    }
                    contrib.push_back(std::move(c));
                }
                append_rows(rows, contrib);
            }
            for (const auto &a : nullspace_q(std::move(rows), monos.size())) {
                Polynomial p;
                for (std::size_t i = 0; i < monos.size(); ++i) {
                    if (a[i] != 0) {
                        p += Polynomial(a[i], monos[i]);
                    }
                }
                s.accept(RationalFunction(p, q));
            }
        }
    }
    return s.found;
}

std::size_t certify_independence(const std::vector<RationalFunction> &invs, const GeneratorBasis &basis,
                                 std::size_t expected, std::uint64_t seed)
{
    for (const auto &f : invs) {
        for (const auto &r : apply_to(f, basis)) {
            if (!r.is_zero()) {
                throw InvalidArgument("'" + f.str() + "' is not invariant under the basis");
            }
        }
    }
    std::mt19937_64 rng(seed);
    return jacobian_rank(invs, basis.parameters, 10, rng, std::min(expected, invs.size()));
}

std::vector<RationalFunction> monic_coefficients(const OutputSystem &io)
{
    std::vector<RationalFunction> out;
    for (const auto &eq : io.equations) {
        auto parts = collect_by_monomials(eq, {VarKind::Time, VarKind::OutputJet, VarKind::Input});
        if (parts.empty()) {
            continue;
        }
        RationalFunction lead(parts.rbegin()->second);
        for (const auto &[key, coeff] : parts) {
            RationalFunction c = RationalFunction(coeff) / lead;
            if (c.is_constant()) {
                continue;
            }
            if (c.numerator().leading_coeff() < 0) {
                c = -c;
            }
            if (std::find(out.begin(), out.end(), c) == out.end()) {
                out.push_back(std::move(c));
            }
        }
    }
    return out;
}

bool function_of_invariants_check(const OutputSystem &io, const std::vector<RationalFunction> &invs,
                                  const GeneratorBasis &basis, std::uint64_t seed)
{
    auto coeffs = monic_coefficients(io);
    for (const auto &c : coeffs) {
        for (const auto &r : apply_to(c, basis)) {
            if (!r.is_zero()) {
                return false;
            }
        }
    }
    std::mt19937_64 rng(seed);
    std::size_t base = jacobian_rank(invs, basis.parameters, 10, rng, invs.size());
    auto both = invs;
    both.insert(both.end(), coeffs.begin(), coeffs.end());
    return jacobian_rank(both, basis.parameters, 10, rng, basis.parameters.size() + 1) == base;
}

InvariantReport invariant_report(const GeneratorBasis &basis, const AnsatzConfig &config)
{
    InvariantReport r;
    r.parameters = basis.parameters;
    r.identifiable = zero_infinitesimal_params(basis);
    r.invariants = find_invariants(basis, config);
    r.expected_rank = basis.parameters.size() - std::min(basis.parameters.size(), basis.dimension());
    r.independence_rank = certify_independence(r.invariants, basis, r.expected_rank, config.seed);
    r.incomplete = r.independence_rank < r.expected_rank;
    for (auto p : basis.parameters) {
        bool id = std::find(r.identifiable.begin(), r.identifiable.end(), p) != r.identifiable.end();
        r.verdicts.emplace_back(p, id ? Verdict::Identifiable : Verdict::Unidentifiable);
    }
    r.model_verdict = basis.dimension() == 0 ? Verdict::Identifiable : Verdict::Unidentifiable;
    return r;
}

} // namespace psym
