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

// Universal parameter invariants of a generator basis, and the per-parameter
// identifiability verdict they imply.

#ifndef PSYM_INVARIANTS_HPP
#define PSYM_INVARIANTS_HPP

#include <cstdint>
#include <random>

#include <psym/nullspace.hpp>

namespace psym {

struct AnsatzConfig {
    unsigned max_num_degree = 3;  // numerator degree bound of ansatz (d)
    unsigned max_den_factors = 2; // dictionary factors per denominator
    std::uint64_t seed = 1;
};

enum class Verdict { Identifiable, Unidentifiable };

const char *to_string(Verdict v);

struct InvariantReport {
    std::vector<Variable> parameters;
    std::vector<Variable> identifiable;
    std::vector<RationalFunction> invariants;
    std::size_t independence_rank = 0;
    std::size_t expected_rank = 0;
    std::vector<std::pair<Variable, Verdict>> verdicts; // parameter order
    Verdict model_verdict = Verdict::Identifiable;
    bool incomplete = false; // fewer independent invariants than expected
};

// X_k(candidate) for every basis vector k.
std::vector<RationalFunction> apply_to(const RationalFunction &candidate, const GeneratorBasis &basis);

std::vector<Variable> zero_infinitesimal_params(const GeneratorBasis &basis);

// Ansatz ladder: (a) parameters with zero infinitesimal, (b) linear forms,
// (c) monomials, (d) P/Q with Q from a dictionary of infinitesimal factors.
// Each accepted invariant raises the Jacobian rank of the set.
std::vector<RationalFunction> find_invariants(const GeneratorBasis &basis, const AnsatzConfig &config = {});

// Max Jacobian rank over 10 random rational points, stopping early once
// `expected` is reached. Throws InvalidArgument if some input is not invariant.
std::size_t certify_independence(const std::vector<RationalFunction> &invs, const GeneratorBasis &basis,
                                 std::size_t expected, std::uint64_t seed = 1);

// Output-equation coefficients after dividing each equation by the
// coefficient of its largest jet monomial; constants dropped, signs fixed
// to a positive leading numerator coefficient, duplicates removed.
std::vector<RationalFunction> monic_coefficients(const OutputSystem &io);

// True iff every monic coefficient is annihilated by the basis and depends
// functionally on `invs` (adding it does not raise the Jacobian rank).
bool function_of_invariants_check(const OutputSystem &io, const std::vector<RationalFunction> &invs,
                                  const GeneratorBasis &basis, std::uint64_t seed = 1);

InvariantReport invariant_report(const GeneratorBasis &basis, const AnsatzConfig &config = {});

// Presentation of an invariant: polynomial if possible, else the orientation
// with the shorter numerator (ties: the first parameter whose net degree is
// nonzero goes upstairs); primitive integer numerator with positive leading
// coefficient over a primitive denominator with positive trailing coefficient.
RationalFunction present_invariant(const RationalFunction &f, const std::vector<Variable> &parameters);
std::string invariant_string(const RationalFunction &f);

std::size_t jacobian_rank(const std::vector<RationalFunction> &fs, const std::vector<Variable> &params, int trials,
                          std::mt19937_64 &rng, std::size_t stop_at);

} // namespace psym

#endif
