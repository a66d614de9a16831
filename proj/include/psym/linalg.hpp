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

// Exact linear algebra over Q and over polynomial rings.

#ifndef PSYM_LINALG_HPP
#define PSYM_LINALG_HPP

#include <random>
#include <vector>

#include <psym/algebra.hpp>

namespace psym {

using QMatrix = std::vector<std::vector<BigRational>>;
using PolyMatrix = std::vector<std::vector<Polynomial>>;

std::size_t rank_q(QMatrix a);

// Basis of {x : a x = 0} read off the reduced row echelon form: one vector
// per free column, with that column set to 1 and the other free ones to 0.
std::vector<std::vector<BigRational>> nullspace_q(QMatrix a, std::size_t cols);

struct Echelon {
    PolyMatrix rows;                   // upper echelon form, rank rows kept
    std::vector<std::size_t> pivots;   // pivot column per row
};

// Fraction-free elimination. Pivots are the smallest nonzero candidates by
// (term count, total degree); every intermediate entry is a polynomial. The
// reduced form also clears above each pivot, leaving every pivot equal to the
// last one.
Echelon bareiss(PolyMatrix a, std::size_t cols, bool reduced = false);

// Integer-valued positive rationals for generic-point evaluation.
Assignment random_point(const std::vector<Variable> &vars, std::mt19937_64 &rng);

// Scales a vector of rational functions to coprime primitive integer
// polynomials whose first nonzero component has a positive leading coefficient.
std::vector<Polynomial> canonical_vector(const std::vector<RationalFunction> &v);

// Scales a rational vector to coprime integers, first nonzero entry positive.
std::vector<BigRational> integer_vector(std::vector<BigRational> v);

} // namespace psym

#endif
