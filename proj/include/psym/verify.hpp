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


// Numerical and cross-method checks: simulation with exact output jets,
// output-invariance residuals, and coefficient extraction from the monic
// input-output equations as an independent oracle.

#ifndef PSYM_VERIFY_HPP
#define PSYM_VERIFY_HPP

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <psym/flows.hpp>
#include <psym/invariants.hpp>
#include <psym/reduction.hpp>

namespace psym {

// Input signals with closed-form derivatives of every order.
struct Signal {
    enum class Kind { Zero, Constant, Sine, ExpDecay };
    Kind kind = Kind::Zero;
    double a = 0;
    double rate = 0; // omega for sine, r for exp_decay

    static Signal zero() { return {}; }
    static Signal constant(double c) { return {Kind::Constant, c, 0}; }
    static Signal sine(double a, double omega) { return {Kind::Sine, a, omega}; }      // a*sin(omega*t)
    static Signal exp_decay(double a, double r) { return {Kind::ExpDecay, a, r}; }     // a*exp(-r*t)

    // "zero", "constant(c)", "sine(a,omega)" or "exp_decay(a,r)".
    static Signal parse(std::string_view text);

    double jet(double t, unsigned k) const;
    std::string str() const;
};

struct SimulationConfig {
    std::vector<double> initial_states;
    std::vector<double> time_grid; // strictly increasing
    std::map<std::string, Signal> inputs;
    double step = 1e-3; // fixed internal RK4 step bound
};

struct Simulation {
    std::vector<double> times;
    std::vector<std::vector<double>> states;  // per time
    std::vector<std::vector<double>> outputs; // per time, model output order
    std::vector<Variable> jet_variables;      // output jets, input jets and time
    std::vector<std::vector<double>> jets;    // per time, aligned with jet_variables
};

// RK4 along the grid. Output jets up to `jet_orders` (output name -> order)
// are iterated Lie derivatives of h evaluated on the states.
// Throws InvalidArgument, PoleOnTrajectory or BlowUp.
Simulation simulate(const ModelSpec &spec, const std::vector<double> &theta, const SimulationConfig &cfg,
                    const std::map<std::string, std::uint32_t> &jet_orders = {});

// CSV with header `t,<states>,<outputs>,traj_id`.
std::string simulation_csv(const Simulation &sim, const ModelSpec &spec, std::size_t id = 0);

inline constexpr double kResidualPass = 1e-8;
inline constexpr double kResidualFail = 1e-3;

enum class Outcome { Pass, Fail, Inconclusive };

const char *to_string(Outcome o);
Outcome classify_residual(double r);

struct ResidualCertificate {
    double max_abs_residual = 0; // normalized
    std::vector<std::vector<double>> profile; // per equation, per grid point
    std::vector<double> theta;
    std::vector<double> theta_hat;
    Outcome outcome = Outcome::Pass;
};

// Evaluates Delta_j(t, jets of the theta-trajectory, theta_hat), each value
// divided by the largest |term| of Delta_j at that point.
ResidualCertificate residual_check(const OutputSystem &io, const ModelSpec &spec, const std::vector<double> &theta,
                                   const std::vector<double> &theta_hat, const SimulationConfig &cfg);

// Secondary mode: integrates the explicit output ODEs with theta_hat from the
// initial output jets of the theta-trajectory and compares outputs.
struct OutputComparison {
    double max_rel_difference = 0;
    Outcome outcome = Outcome::Pass;
};

OutputComparison resimulate_outputs(const OutputSystem &io, const ModelSpec &spec, const std::vector<double> &theta,
                                    const std::vector<double> &theta_hat, const SimulationConfig &cfg);

// theta moved by eps along the instance.
std::vector<double> flowed_parameters(const GeneratorInstance &inst, const std::vector<double> &theta, double eps,
                                      const FlowOptions &options = {});

// Coefficients of the monic input-output equations.
std::vector<RationalFunction> da_extract(const OutputSystem &io);

// True iff every coefficient is annihilated by the basis and the Jacobian
// ranks of the coefficients and of the invariants agree (10 random points).
bool cross_check(const std::vector<RationalFunction> &da, const InvariantReport &report, const GeneratorBasis &basis,
                 std::uint64_t seed = 1);

} // namespace psym

#endif
