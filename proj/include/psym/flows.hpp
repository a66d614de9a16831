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

// Finite parameter transformations generated by a basis element:
// d theta/d eps = chi(theta), theta(0) = theta0.

#ifndef PSYM_FLOWS_HPP
#define PSYM_FLOWS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <psym/nullspace.hpp>

namespace psym {

struct GeneratorInstance {
    GeneratorBasis basis;
    std::vector<BigRational> alpha; // one weight per basis vector

    GeneratorInstance(GeneratorBasis b, std::vector<BigRational> a);
    // sum_k alpha_k * vector_k
    std::vector<RationalFunction> infinitesimal() const;
};

enum class ComponentKind { Zero, Translation, Scaling, General };

const char *to_string(ComponentKind k);

struct ComponentClass {
    ComponentKind kind = ComponentKind::Zero;
    BigRational rate = 0; // the constant for translation and scaling
};

// Throws UnknownVariable if `param` is not a basis parameter.
ComponentClass classify_component(const GeneratorInstance &inst, Variable param);

enum class FlowMethod { ClosedForm, RK4 };

const char *to_string(FlowMethod m);

struct FlowOptions {
    bool require_positive = true; // all parameters of the model class are positive
    bool force_numeric = false;   // integrate even when a closed form exists
    double blowup = 1e12;
    double richardson_tol = 1e-10; // local error estimate per unit eps
};

struct FlowTrajectory {
    std::size_t id = 0;
    std::vector<double> epsilons;            // strictly increasing, contains 0
    std::vector<std::vector<double>> points; // one parameter vector per epsilon
    std::vector<BigRational> start;
    FlowMethod method = FlowMethod::ClosedForm;
};

// Throws InvalidArgument for bad grids or starts and BlowUp when the flow
// leaves the admissible range.
FlowTrajectory flow(const GeneratorInstance &inst, const std::vector<BigRational> &theta0,
                    const std::vector<double> &eps_grid, const FlowOptions &options = {}, std::size_t id = 0);

// Deterministic starting points with entries k/100, k in [5, 95], kept only
// when their flow over `grid` stays admissible; after 400 draws the range
// widens to k/10, then k. Throws InvalidArgument if `count` points are not
// found within those draws.
std::vector<std::vector<BigRational>> seeded_starts(const GeneratorInstance &inst, const std::vector<double> &grid,
                                                    std::size_t count, std::uint64_t seed,
                                                    const FlowOptions &options = {});

// n evenly spaced samples on [lo, hi]; 0 is inserted if missing.
std::vector<double> eps_grid(double lo, double hi, std::size_t n);

// CSV with header `eps,<coord...>,traj_id`. A coordinate is a parameter name
// or an expression over the parameters; anything else is UnknownCoordinate.
std::string emit_projection(const std::vector<FlowTrajectory> &trajs, const std::vector<std::string> &coords,
                            const std::vector<Variable> &parameters);

} // namespace psym

#endif
