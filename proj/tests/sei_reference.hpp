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

// Reference SEI data: the condition matrix and null-space vectors.

#ifndef PSYM_TESTS_SEI_REFERENCE_HPP
#define PSYM_TESTS_SEI_REFERENCE_HPP

#include <psym/nullspace.hpp>

#include "fixtures.hpp"

namespace testutil {

// The reference 11x9 matrix, columns (c, beta, delta, upsilon, mu_S, mu_E,
// mu_I, k_I, k_E).
inline const std::vector<std::vector<const char *>> kSeiRows = {
    {"0", "0", "-k_E*k_I^3", "0", "0", "0", "0", "-delta*k_E*k_I^2", "delta*k_I^3"},
    {"0", "0", "k_E*k_I^3", "0", "0", "0", "0", "delta*k_E*k_I^2", "-delta*k_I^3"},
    {"0", "0", "0", "0", "-k_E^2*k_I^2", "0", "0", "0", "0"},
    {"0", "0", "k_E*k_I^3*mu_S", "0", "delta*k_E*k_I^3", "0", "0", "delta*k_E*k_I^2*mu_S", "-delta*k_I^3*mu_S"},
    {"beta*upsilon*k_E^2*k_I^2", "c*upsilon*k_E^2*k_I^2", "0", "beta*c*k_E^2*k_I^2", "-k_E^2*k_I^2*mu_I", "0",
     "-k_E^2*k_I^2*mu_S", "0", "0"},
    {"0", "-k_E^2*k_I", "0", "0", "0", "0", "0", "beta*k_E^2", "0"},
    {"0", "delta*k_E*k_I^2", "beta*k_E*k_I^2", "0", "0", "0", "0", "0", "-beta*delta*k_I^2"},
    {"0", "-k_E^2*k_I*mu_I", "0", "0", "0", "0", "-beta*k_E^2*k_I", "beta*k_E^2*mu_I", "0"},
    {"0", "0", "0", "-k_E*k_I", "0", "0", "0", "upsilon^2*k_E - upsilon*k_E", "-upsilon^2*k_I + upsilon*k_I"},
    {"0", "0", "-upsilon*k_I^2", "delta*k_I^2", "0", "-upsilon^2*k_I^2", "0", "0", "0"},
    {"0", "0", "0", "-k_E*k_I*mu_I", "0", "0", "-upsilon^2*k_E*k_I + upsilon*k_E*k_I",
     "upsilon^2*k_E*mu_I - upsilon*k_E*mu_I", "-upsilon^2*k_I*mu_I + upsilon*k_I*mu_I"},
};

// Null-space vectors in model parameter order
// (c, beta, delta, upsilon, mu_S, mu_E, mu_I, k_E, k_I).

inline psym::GeneratorBasis sei_reference_basis(const psym::ModelSpec &sei)
{
    auto vec = [&](std::initializer_list<const char *> xs) {
        std::vector<psym::RationalFunction> out;
        for (const char *x : xs) {
            out.push_back(expr(sei, x));
        }
        return out;
    };
    return {sei.parameters,
            {vec({"-c*upsilon", "beta", "-delta", "upsilon*(upsilon - 1)", "0", "delta", "0", "0", "k_I"}),
             vec({"c*(upsilon - 1)", "0", "delta", "upsilon*(1 - upsilon)", "0", "-delta", "0", "k_E", "0"})}};
}

} // namespace testutil

#endif
