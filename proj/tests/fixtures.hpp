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

#ifndef PSYM_TESTS_FIXTURES_HPP
#define PSYM_TESTS_FIXTURES_HPP

#include <string>

#include <psym/model.hpp>

#ifndef PSYM_FIXTURE_DIR
#error "PSYM_FIXTURE_DIR must be defined"
#endif

namespace testutil {

inline std::string fixture(const std::string &name) { return std::string(PSYM_FIXTURE_DIR) + "/" + name; }

inline psym::ModelSpec load(const std::string &name) { return psym::load_model_file(fixture(name)); }

// Parses an expression over the model's parameters, outputs (with primes)
// and inputs (with primes).
inline psym::RationalFunction expr(const psym::ModelSpec &spec, const std::string &text)
{
    auto base = psym::model_resolver(spec);
    psym::SymbolResolver r = [&](const std::string &n, unsigned primes) -> std::optional<psym::Variable> {
        for (const auto &o : spec.outputs) {
            if (o.name == n) {
                return psym::Variable::output_jet(n, primes);
            }
        }
        for (auto u : spec.inputs) {
            if (u.name() == n) {
                return psym::Variable::input(n, primes);
            }
        }
        return base(n, primes);
    };
    return psym::parse_expression(text, r);
}

} // namespace testutil

#endif
