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

// Model files and the expression grammar.
//
// A model file is line oriented:
//
//     model glucose
//     states x1, x2
//     params p1, p2, p3, p4, Vp
//     inputs u
//     odes
//       x1' = u + p1*x1 - p2*x2
//       x2' = p3*x2 + p4*x1
//     outputs
//       y = x1/Vp
//     end
//
// Expressions use + - * / ^ and parentheses, with ^ binding tighter than
// unary minus. Exponents must be integer literals. `t` is the time variable.

#ifndef PSYM_MODEL_HPP
#define PSYM_MODEL_HPP

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <psym/algebra.hpp>

namespace psym {

struct ParseDiagnostic {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    int line = 0;   // 1-based, 0 when not tied to a source position
    int column = 0; // 1-based
    std::string message;

    bool is_error() const { return severity == Severity::Error; }
    std::string str() const;
};

std::string format_diagnostics(const std::vector<ParseDiagnostic> &diags);

struct OutputDef {
    std::string name;
    RationalFunction expr;
    friend bool operator==(const OutputDef &, const OutputDef &) = default;
};

struct ModelSpec {
    std::string name;
    std::vector<Variable> states;
    std::vector<Variable> parameters;
    std::vector<Variable> inputs;
    std::vector<RationalFunction> rhs; // rhs[i] is the derivative of states[i]
    std::vector<OutputDef> outputs;

    std::optional<std::size_t> state_index(Variable v) const;
    std::optional<std::size_t> parameter_index(Variable v) const;
    std::optional<std::size_t> output_index(const std::string &name) const;
    std::optional<Variable> find_parameter(const std::string &name) const;

    friend bool operator==(const ModelSpec &, const ModelSpec &) = default;
};

struct ParseResult {
    std::optional<ModelSpec> model; // set iff no error diagnostics
    std::vector<ParseDiagnostic> diagnostics;
};

ParseResult parse_model(std::string_view source);

// Throws ParseError carrying the formatted diagnostics on failure.
ModelSpec load_model(std::string_view source);
ModelSpec load_model_file(const std::string &path);

std::vector<ParseDiagnostic> validate(const ModelSpec &spec);

// Model file text that parses back to an identical ModelSpec.
std::string to_source(const ModelSpec &spec);

// Maps an identifier with `primes` trailing apostrophes onto a variable, or
// returns nullopt (reported as an undeclared identifier).
using SymbolResolver = std::function<std::optional<Variable>(const std::string &name, unsigned primes)>;

struct ExpressionError {
    int column; // 1-based within the parsed text
    std::string message;
};

// Parses a single expression. Throws ParseError on failure; the message
// starts with the 1-based column.
RationalFunction parse_expression(std::string_view text, const SymbolResolver &resolve);

// Same, but reports the failure instead of throwing.
std::optional<RationalFunction> try_parse_expression(std::string_view text, const SymbolResolver &resolve,
                                                     ExpressionError &err);

// Resolver for model-level expressions: states, parameters, inputs and t.
SymbolResolver model_resolver(const ModelSpec &spec);
// Resolver for parameter-only expressions (invariants, flow coordinates).
SymbolResolver parameter_resolver(const ModelSpec &spec);

} // namespace psym

#endif
