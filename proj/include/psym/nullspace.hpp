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

// Exact null space of a condition matrix over Q(parameters).

#ifndef PSYM_NULLSPACE_HPP
#define PSYM_NULLSPACE_HPP

#include <cstdint>
#include <random>

#include <psym/symcond.hpp>

namespace psym {

struct GeneratorBasis {
    std::vector<Variable> parameters;
    // Each vector holds one infinitesimal per parameter. After canonical
    // reduction the components are coprime primitive integer polynomials.
    std::vector<std::vector<RationalFunction>> vectors;

    std::size_t dimension() const { return vectors.size(); }
    bool operator==(const GeneratorBasis &) const = default;
};

// Max exact rank over `trials` random rational parameter points.
std::size_t rank_at_random_points(const ConditionMatrix &m, int trials, std::mt19937_64 &rng);

// Throws SymbolicRankMismatch if the symbolic rank disagrees with the
// random-point rank.
GeneratorBasis solve_nullspace(const ConditionMatrix &m, std::uint64_t seed = 1);

// True when every basis vector annihilates every row, exactly.
bool annihilates(const GeneratorBasis &b, const ConditionMatrix &m);

// Rank over Q(parameters) of a list of vectors, by fraction-free elimination.
std::size_t symbolic_rank(const std::vector<std::vector<RationalFunction>> &vectors);

// Same span over Q(parameters).
bool same_span(const std::vector<std::vector<RationalFunction>> &a, const std::vector<std::vector<RationalFunction>> &b);

// Generator in d-notation, e.g. "p2*d/dp2 - p4*d/dp4".
std::string generator_string(const GeneratorBasis &b, std::size_t k);

} // namespace psym

#endif
