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

#include <psym/symcond.hpp>

namespace psym {

namespace {

Polynomial generator_action(const Polynomial &p, const std::vector<InfinitesimalSymbol> &chi)
{
    Polynomial acc;
    for (const auto &c : chi) {
        Polynomial d = p.derivative(c.parameter);
        if (!d.is_zero()) {
            acc += d * Polynomial(c.symbol);
        }
    }
    return acc;
}

} // namespace

std::vector<InfinitesimalSymbol> infinitesimal_symbols(const std::vector<Variable> &parameters)
{
    std::vector<InfinitesimalSymbol> out;
    out.reserve(parameters.size());
    for (auto p : parameters) {
        out.push_back({p, Variable::ansatz("chi_" + p.name())});
    }
    return out;
}

std::vector<RationalFunction> apply_generator(const OutputSystem &io, Restriction mode)
{
    auto chi = infinitesimal_symbols(io.parameters);
    std::vector<RationalFunction> out;
    for (std::size_t j = 0; j < io.equations.size(); ++j) {
        Polynomial cond;
        if (mode == Restriction::None) {
            cond = generator_action(io.equations[j], chi);
        } else {
            // With Delta = A*lead + B and lead = -B/A on the solution,
            // A * X(Delta) = A*X(B) - B*X(A).
            auto [a, b] = io.split_leading(j);
            cond = a * generator_action(b, chi) - b * generator_action(a, chi);
        }
        out.push_back(RationalFunction(cond.primitive_part()));
    }
    return out;
}

std::vector<Polynomial> ConditionMatrix::reconstruct(std::size_t equations) const
{
    auto chi = infinitesimal_symbols(columns);
    std::vector<Polynomial> out(equations);
    for (const auto &r : rows) {
        Polynomial dot;
        for (std::size_t l = 0; l < columns.size(); ++l) {
            if (!r.entries[l].is_zero()) {
                dot += r.entries[l] * Polynomial(chi[l].symbol);
            }
        }
        out.at(r.equation) += dot.times_monomial(r.key).scaled(r.sign);
    }
    return out;
}

ConditionMatrix build_matrix(const std::vector<RationalFunction> &conds, const std::vector<Variable> &parameters)
{
    ConditionMatrix m;
    m.columns = parameters;
    auto chi = infinitesimal_symbols(parameters);
    std::map<Variable, std::size_t> column_of;
    for (std::size_t l = 0; l < chi.size(); ++l) {
        column_of[chi[l].symbol] = l;
    }
    for (std::size_t j = 0; j < conds.size(); ++j) {
        if (!conds[j].is_polynomial()) {
            throw NonLinearInChi("symmetry condition still has a denominator");
        }
        auto groups = collect_by_monomials(conds[j].numerator(), {VarKind::Time, VarKind::OutputJet, VarKind::Input});
        for (const auto &[key, coeff] : groups) {
            ConditionRow row;
            row.equation = j;
            row.key = key;
            row.entries.assign(parameters.size(), Polynomial());
            std::vector<std::vector<Term>> parts(parameters.size());
            for (const auto &t : coeff.terms()) {
                std::optional<std::size_t> col;
                std::vector<VarPower> rest;
                for (const auto &f : t.mono.factors()) {
                    if (f.var.kind() == VarKind::AnsatzCoeff) {
                        auto it = column_of.find(f.var);
                        if (it == column_of.end() || f.exp != 1 || col) {
                            throw NonLinearInChi("condition is not linear in the infinitesimals");
                        }
                        col = it->second;
                    } else if (f.var.kind() == VarKind::Parameter) {
                        rest.push_back(f);
                    } else {
                        throw NonLinearInChi("unexpected variable '" + f.var.display() + "' in a condition");
                    }
                }
                if (!col) {
                    throw NonLinearInChi("condition has a term free of the infinitesimals");
                }
                parts[*col].push_back({Monomial::from_powers(std::move(rest)), t.coeff});
            }
            bool nonzero = false;
            for (std::size_t l = 0; l < parameters.size(); ++l) {
                row.entries[l] = Polynomial::from_terms(std::move(parts[l]));
                nonzero = nonzero || !row.entries[l].is_zero();
            }
            if (!nonzero) {
                continue;
            }
            for (const auto &e : row.entries) {
                if (!e.is_zero()) {
                    if (e.leading_coeff() < 0) {
                        row.sign = -1;
                        for (auto &x : row.entries) {
                            x = -x;
                        }
                    }
                    break;
                }
            }
            m.rows.push_back(std::move(row));
        }
    }
    return m;
}

} // namespace psym
