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

// Linearised symmetry conditions for generators acting on the parameters only.

#ifndef PSYM_SYMCOND_HPP
#define PSYM_SYMCOND_HPP

#include <vector>

#include <psym/algebra.hpp>
#include <psym/reduction.hpp>

namespace psym {

struct InfinitesimalSymbol {
    Variable parameter;
    Variable symbol; // AnsatzCoeff "chi_<parameter>"
};

std::vector<InfinitesimalSymbol> infinitesimal_symbols(const std::vector<Variable> &parameters);

enum class Restriction {
    OnSolution, // leading derivative replaced by its normal form
    None,       // every jet read off independently, leading derivative included
};

// X(Delta_j) = sum_l chi_l dDelta_j/dtheta_l for each equation, restricted as
// requested and cleared of denominators and rational content.
std::vector<RationalFunction> apply_generator(const OutputSystem &io, Restriction mode = Restriction::OnSolution);

struct ConditionRow {
    std::size_t equation = 0;
    Monomial key; // monomial in time, output and input jets
    int sign = 1; // condition_j contains sign * key * (entries . chi)
    std::vector<Polynomial> entries;
};

struct ConditionMatrix {
    std::vector<Variable> columns; // parameters, in model order
    std::vector<ConditionRow> rows;

    std::size_t row_count() const { return rows.size(); }
    std::size_t column_count() const { return columns.size(); }
    // Expands the rows against the chi symbols, one polynomial per equation.
    std::vector<Polynomial> reconstruct(std::size_t equations) const;
};

// Collects the conditions by jet monomials. Throws NonLinearInChi when an
// expression is not linear homogeneous in the chi symbols.
ConditionMatrix build_matrix(const std::vector<RationalFunction> &conds, const std::vector<Variable> &parameters);

} // namespace psym

#endif
