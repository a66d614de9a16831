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

// Elimination of the states: turns a ModelSpec into polynomial relations
// between outputs, inputs, their derivatives and the parameters.

#ifndef PSYM_REDUCTION_HPP
#define PSYM_REDUCTION_HPP

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <psym/algebra.hpp>
#include <psym/model.hpp>

namespace psym {

struct OutputSystem {
    std::vector<Polynomial> equations;
    std::vector<Variable> leading;           // OutputJet each equation is solved for
    std::vector<RationalFunction> normal_rhs; // value of leading[j] on Delta_j = 0
    std::map<std::string, std::uint32_t> orders;
    std::vector<Variable> parameters; // column order for the symmetry conditions

    // Coefficient of leading[j] and the remainder: equations[j] == A*lead + B.
    std::pair<Polynomial, Polynomial> split_leading(std::size_t j) const;

    friend bool operator==(const OutputSystem &, const OutputSystem &) = default;
};

struct EliminationStep {
    Variable state;
    std::string output; // equation y^(order) = ... the state was solved from
    std::uint32_t order = 0;
    RationalFunction solution;
};

struct EliminationTrace {
    std::vector<EliminationStep> steps;
    std::vector<Variable> unsolved; // states never needed (or never solvable)
    bool success = false;
    std::string str() const;
};

class EliminationError : public EliminationFailed {
public:
    EliminationError(const std::string &msg, EliminationTrace trace) : EliminationFailed(msg), trace_(std::move(trace)) {}
    const EliminationTrace &trace() const { return trace_; }

private:
    EliminationTrace trace_;
};

struct Reduction {
    OutputSystem io;
    EliminationTrace trace;
};

// Total time derivative along the model vector field; input jets advance by one.
RationalFunction lie_derivative(const RationalFunction &e, const ModelSpec &spec);

// Throws EliminationError when the triangular degree-1 elimination gets stuck.
Reduction reduce_to_io(const ModelSpec &spec);

// Reads user-supplied input-output equations. One equation per line, either
// "lhs = rhs" or a bare expression; `lead <output> <order>` names the leading
// derivative of the next equation. Without a directive the highest-order jet
// of the first output appearing in the equation leads.
OutputSystem load_io(std::string_view source, const ModelSpec &spec);
OutputSystem load_io_file(const std::string &path, const ModelSpec &spec);

// Builds the normal form from raw equations with designated leading variables.
OutputSystem make_output_system(const std::vector<RationalFunction> &equations, const std::vector<Variable> &leading,
                                const ModelSpec &spec);

std::vector<BigRational> residual(const OutputSystem &io, const Assignment &jet_point);

// Re-substitutes h and its Lie derivatives for the output jets.
RationalFunction substitute_outputs(const Polynomial &p, const ModelSpec &spec);

std::string to_string(const OutputSystem &io);

} // namespace psym

#endif
