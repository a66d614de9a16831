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


#include <psym/verify.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

#include <psym/numeric.hpp>

namespace psym {

namespace {

using Vec = std::vector<double>;

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string_view::npos ? std::string() : std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string &s)
{
    char *end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
        throw InvalidArgument("'" + s + "' is not a number");
    }
    return v;
}

void check_grid(const Vec &grid, const char *what)
{
    if (grid.empty()) {
        throw InvalidArgument(std::string(what) + " is empty");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw InvalidArgument(std::string(what) + " must be strictly increasing");
        }
    }
}

// Evaluation context shared by the state and output integrators: slot 0 is
// time, then the integrated variables, then parameters, then input jets.
struct Layout {
    std::vector<Variable> slots;
    std::size_t n_vars = 0, n_params = 0;
    std::vector<std::pair<std::size_t, std::pair<const Signal *, std::uint32_t>>> inputs;

    Layout(const std::vector<Variable> &vars, const std::vector<Variable> &params, const ModelSpec &spec,
           const SimulationConfig &cfg, std::uint32_t input_order)
        : n_vars(vars.size()), n_params(params.size())
    {
        slots.push_back(Variable::time());
        slots.insert(slots.end(), vars.begin(), vars.end());
        slots.insert(slots.end(), params.begin(), params.end());
        for (auto u : spec.inputs) {
            auto it = cfg.inputs.find(u.name());
            if (it == cfg.inputs.end()) {
                throw InvalidArgument("no signal bound to input '" + u.name() + "'");
            }
            for (std::uint32_t k = 0; k <= input_order; ++k) {
                inputs.push_back({slots.size(), {&it->second, k}});
                slots.push_back(Variable::input(u.name(), k));
            }
        }
    }

    Vec point(double t, const Vec &x, const Vec &theta) const
    {
        Vec v(slots.size());
        v[0] = t;
        std::copy(x.begin(), x.end(), v.begin() + 1);
        std::copy(theta.begin(), theta.end(), v.begin() + 1 + std::ptrdiff_t(n_vars));
        for (const auto &[slot, sig] : inputs) {
            v[slot] = sig.first->jet(t, sig.second);
        }
        return v;
    }
};

double eval_checked(const CompiledFunction &f, const Vec &at, double t)
{
    double den = f.denominator(at.data());
    double v = f.numerator(at.data()) / den;
    if (den == 0 || !std::isfinite(v)) {
        throw PoleOnTrajectory("denominator vanishes at t = " + format_double(t));
    }
    return v;
}

struct System {
    const Layout &layout;
    std::vector<CompiledFunction> rhs;
    const Vec &theta;

    Vec operator()(double t, const Vec &x) const
    {
        Vec at = layout.point(t, x, theta);
        Vec d(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            d[i] = eval_checked(rhs[i], at, t);
        }
        return d;
    }
};

// Fixed-step RK4 sampled at the grid.
std::vector<Vec> integrate(const System &f, Vec x, const Vec &grid, double step)
{
    if (!(step > 0)) {
        throw InvalidArgument("step must be positive");
    }
    std::vector<Vec> out{x};
    const std::size_t n = x.size();
    Vec tmp(n);
    for (std::size_t g = 1; g < grid.size(); ++g) {
        double len = grid[g] - grid[g - 1];
        auto steps = std::max<std::size_t>(1, std::size_t(std::ceil(len / step - 1e-9)));
        double h = len / double(steps);
        for (std::size_t s = 0; s < steps; ++s) {
            double t = grid[g - 1] + h * double(s);
            Vec k1 = f(t, x);
            for (std::size_t i = 0; i < n; ++i) {
                tmp[i] = x[i] + 0.5 * h * k1[i];
            }
            Vec k2 = f(t + 0.5 * h, tmp);
            for (std::size_t i = 0; i < n; ++i) {
                tmp[i] = x[i] + 0.5 * h * k2[i];
            }
            Vec k3 = f(t + 0.5 * h, tmp);
            for (std::size_t i = 0; i < n; ++i) {
                tmp[i] = x[i] + h * k3[i];
            }
            Vec k4 = f(t + h, tmp);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
                if (!std::isfinite(x[i]) || std::fabs(x[i]) > 1e12) {
                    throw BlowUp("trajectory diverges near t = " + format_double(t + h));
                }
            }
        }
        out.push_back(x);
    }
    return out;
}

std::uint32_t max_order(const std::map<std::string, std::uint32_t> &orders)
{
    std::uint32_t m = 0;
    for (const auto &[name, o] : orders) {
        m = std::max(m, o);
    }
    return m;
}

} // namespace

Signal Signal::parse(std::string_view text)
{
    std::string s = trim(text);
    auto open = s.find('(');
    std::string head = trim(s.substr(0, open));
    std::vector<double> args;
    if (open != std::string::npos) {
        if (s.back() != ')') {
            throw InvalidArgument("signal '" + s + "': missing ')'");
        }
        std::string inner = s.substr(open + 1, s.size() - open - 2);
        std::size_t pos = 0;
        while (true) {
            auto comma = inner.find(',', pos);
            args.push_back(parse_number(trim(inner.substr(pos, comma - pos))));
            if (comma == std::string::npos) {
                break;
            }
            pos = comma + 1;
        }
    }
    auto want = [&](std::size_t n) {
        if (args.size() != n) {
            throw InvalidArgument("signal '" + head + "' takes " + std::to_string(n) + " arguments");
        }
    };
    if (head == "zero") {
        if (open != std::string::npos) {
            want(0);
        }
        return zero();
    }
    if (head == "constant") {
        want(1);
        return constant(args[0]);
    }
    if (head == "sine") {
        want(2);
        return sine(args[0], args[1]);
    }
    if (head == "exp_decay") {
        want(2);
        return exp_decay(args[0], args[1]);
    }
    throw InvalidArgument("unknown signal '" + head + "' (expected zero, constant, sine or exp_decay)");
}

double Signal::jet(double t, unsigned k) const
{
    switch (kind) {
    case Kind::Zero:
        return 0;
    case Kind::Constant:
        return k == 0 ? a : 0;
    case Kind::Sine: {
        // d^k/dt^k sin(w t) = w^k sin(w t + k pi/2)
        double w = std::pow(rate, k) * a;
        switch (k % 4) {
        case 0:
            return w * std::sin(rate * t);
        case 1:
            return w * std::cos(rate * t);
        case 2:
            return -w * std::sin(rate * t);
        default:
            return -w * std::cos(rate * t);
        }
    }
    case Kind::ExpDecay:
        return a * std::pow(-rate, k) * std::exp(-rate * t);
    }
    return 0;
}

std::string Signal::str() const
{
    switch (kind) {
    case Kind::Zero:
        return "zero";
    case Kind::Constant:
        return "constant(" + format_double(a) + ")";
    case Kind::Sine:
        return "sine(" + format_double(a) + "," + format_double(rate) + ")";
    case Kind::ExpDecay:
        break;
    }
    return "exp_decay(" + format_double(a) + "," + format_double(rate) + ")";
}

Simulation simulate(const ModelSpec &spec, const std::vector<double> &theta, const SimulationConfig &cfg,
                    const std::map<std::string, std::uint32_t> &jet_orders)
{
    if (theta.size() != spec.parameters.size()) {
        throw InvalidArgument("expected " + std::to_string(spec.parameters.size()) + " parameter values, got " +
                              std::to_string(theta.size()));
    }
    if (cfg.initial_states.size() != spec.states.size()) {
        throw InvalidArgument("expected " + std::to_string(spec.states.size()) + " initial states, got " +
                              std::to_string(cfg.initial_states.size()));
    }
    check_grid(cfg.time_grid, "time grid");
    for (const auto &[name, order] : jet_orders) {
        if (!spec.output_index(name)) {
            throw InvalidArgument("unknown output '" + name + "'");
        }
    }
    const std::uint32_t top = max_order(jet_orders);
    Layout layout(spec.states, spec.parameters, spec, cfg, top);

    System sys{layout, {}, theta};
    for (const auto &r : spec.rhs) {
        sys.rhs.emplace_back(r, layout.slots);
    }

    Simulation sim;
    sim.times = cfg.time_grid;
    sim.states = integrate(sys, cfg.initial_states, cfg.time_grid, cfg.step);

    // Symbolic jets y^(k) = L^k h.
    std::vector<CompiledFunction> jet_fns;
    for (const auto &o : spec.outputs) {
        auto it = jet_orders.find(o.name);
        std::uint32_t n = it == jet_orders.end() ? 0 : it->second;
        RationalFunction e = o.expr;
        for (std::uint32_t k = 0; k <= n; ++k) {
            if (k > 0) {
                e = lie_derivative(e, spec);
            }
            sim.jet_variables.push_back(Variable::output_jet(o.name, k));
            jet_fns.emplace_back(e, layout.slots);
        }
    }
    for (const auto &[slot, sig] : layout.inputs) {
        sim.jet_variables.push_back(layout.slots[slot]);
    }
    sim.jet_variables.push_back(Variable::time());

    for (std::size_t i = 0; i < sim.times.size(); ++i) {
        double t = sim.times[i];
        Vec at = layout.point(t, sim.states[i], theta);
        Vec jets;
        Vec outs;
        std::size_t f = 0;
        for (const auto &o : spec.outputs) {
            auto it = jet_orders.find(o.name);
            std::uint32_t n = it == jet_orders.end() ? 0 : it->second;
            for (std::uint32_t k = 0; k <= n; ++k) {
                jets.push_back(eval_checked(jet_fns[f++], at, t));
                if (k == 0) {
                    outs.push_back(jets.back());
                }
            }
        }
        for (const auto &[slot, sig] : layout.inputs) {
            jets.push_back(at[slot]);
        }
        jets.push_back(t);
        sim.outputs.push_back(std::move(outs));
        sim.jets.push_back(std::move(jets));
    }
    return sim;
}

std::string simulation_csv(const Simulation &sim, const ModelSpec &spec, std::size_t id)
{
    std::string out = "t";
    for (auto s : spec.states) {
        out += "," + s.name();
    }
    for (const auto &o : spec.outputs) {
        out += "," + o.name;
    }
    out += ",traj_id\n";
    for (std::size_t i = 0; i < sim.times.size(); ++i) {
        out += format_double(sim.times[i]);
        for (double v : sim.states[i]) {
            out += "," + format_double(v);
        }
        for (double v : sim.outputs[i]) {
            out += "," + format_double(v);
        }
        out += "," + std::to_string(id) + "\n";
    }
    return out;
}

const char *to_string(Outcome o)
{
    switch (o) {
    case Outcome::Pass:
        return "pass";
    case Outcome::Fail:
        return "fail";
    case Outcome::Inconclusive:
        break;
    }
    return "inconclusive";
}

Outcome classify_residual(double r)
{
    if (r <= kResidualPass) {
        return Outcome::Pass;
    }
    return r >= kResidualFail ? Outcome::Fail : Outcome::Inconclusive;
}

ResidualCertificate residual_check(const OutputSystem &io, const ModelSpec &spec, const std::vector<double> &theta,
                                   const std::vector<double> &theta_hat, const SimulationConfig &cfg)
{
    if (theta_hat.size() != spec.parameters.size()) {
        throw InvalidArgument("expected " + std::to_string(spec.parameters.size()) + " transformed parameters, got " +
                              std::to_string(theta_hat.size()));
    }
    Simulation sim = simulate(spec, theta, cfg, io.orders);
    std::vector<Variable> slots = sim.jet_variables;
    slots.insert(slots.end(), spec.parameters.begin(), spec.parameters.end());

    ResidualCertificate cert;
    cert.theta = theta;
    cert.theta_hat = theta_hat;
    std::vector<CompiledPolynomial> eqs;
    for (const auto &eq : io.equations) {
        eqs.emplace_back(eq, slots);
    }
    cert.profile.assign(eqs.size(), Vec(sim.times.size(), 0.0));
    for (std::size_t i = 0; i < sim.times.size(); ++i) {
        Vec at = sim.jets[i];
        at.insert(at.end(), theta_hat.begin(), theta_hat.end());
        for (std::size_t j = 0; j < eqs.size(); ++j) {
            double scale = eqs[j].magnitude(at.data());
            double r = scale == 0 ? 0 : std::fabs(eqs[j](at.data())) / scale;
            cert.profile[j][i] = r;
            cert.max_abs_residual = std::max(cert.max_abs_residual, r);
        }
    }
    cert.outcome = classify_residual(cert.max_abs_residual);
    return cert;
}

OutputComparison resimulate_outputs(const OutputSystem &io, const ModelSpec &spec, const std::vector<double> &theta,
                                    const std::vector<double> &theta_hat, const SimulationConfig &cfg)
{
    if (theta_hat.size() != spec.parameters.size()) {
        throw InvalidArgument("expected " + std::to_string(spec.parameters.size()) + " transformed parameters, got " +
                              std::to_string(theta_hat.size()));
    }
    // Integrated variables: y^(0..n-1) for each equation's leading jet y^(n).
    std::vector<Variable> vars;
    std::vector<std::size_t> top; // index in vars of y^(n-1), per equation
    std::set<std::string> seen;
    for (auto lead : io.leading) {
        if (lead.order() == 0 || !seen.insert(lead.name()).second) {
            throw InvalidArgument("output system has no explicit ODE form for output '" + lead.name() + "'");
        }
        for (std::uint32_t k = 0; k < lead.order(); ++k) {
            vars.push_back(Variable::output_jet(lead.name(), k));
        }
        top.push_back(vars.size() - 1);
    }
    Simulation ref = simulate(spec, theta, cfg, io.orders);
    Layout layout(vars, spec.parameters, spec, cfg, max_order(io.orders));
    System sys{layout, std::vector<CompiledFunction>(vars.size()), theta_hat};
    for (std::size_t i = 0; i < vars.size(); ++i) {
        // Chain y^(k)' = y^(k+1) except at the top of each chain.
        auto it = std::find(top.begin(), top.end(), i);
        try {
            if (it != top.end()) {
                sys.rhs[i] = CompiledFunction(io.normal_rhs[std::size_t(it - top.begin())], layout.slots);
            } else {
                sys.rhs[i] = CompiledFunction(RationalFunction(vars[i + 1]), layout.slots);
            }
        } catch (const UnknownVariable &) {
            throw InvalidArgument("output system has no explicit ODE form: a normal form depends on a leading jet");
        }
    }
    Vec x0;
    for (auto v : vars) {
        auto pos = std::find(ref.jet_variables.begin(), ref.jet_variables.end(), v) - ref.jet_variables.begin();
        x0.push_back(ref.jets[0][std::size_t(pos)]);
    }
    auto traj = integrate(sys, x0, cfg.time_grid, cfg.step);
    OutputComparison cmp;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        for (std::size_t j = 0; j < vars.size(); ++j) {
            if (vars[j].order() != 0) {
                continue;
            }
            double y = ref.outputs[i][*spec.output_index(vars[j].name())];
            cmp.max_rel_difference = std::max(cmp.max_rel_difference, std::fabs(traj[i][j] - y) / std::max(1.0, std::fabs(y)));
        }
    }
    cmp.outcome = classify_residual(cmp.max_rel_difference);
    return cmp;
}

std::vector<double> flowed_parameters(const GeneratorInstance &inst, const std::vector<double> &theta, double eps,
                                      const FlowOptions &options)
{
    std::vector<BigRational> start;
    for (double v : theta) {
        start.emplace_back(v);
    }
    if (eps == 0) {
        return theta;
    }
    std::vector<double> grid = eps < 0 ? std::vector<double>{eps, 0.0} : std::vector<double>{0.0, eps};
    FlowTrajectory tr = flow(inst, start, grid, options);
    return eps < 0 ? tr.points.front() : tr.points.back();
}

std::vector<RationalFunction> da_extract(const OutputSystem &io) { return monic_coefficients(io); }

bool cross_check(const std::vector<RationalFunction> &da, const InvariantReport &report, const GeneratorBasis &basis,
                 std::uint64_t seed)
{
    for (const auto &c : da) {
        for (const auto &r : apply_to(c, basis)) {
            if (!r.is_zero()) {
                return false;
            }
        }
    }
    std::mt19937_64 rng(seed);
    const std::size_t n = basis.parameters.size();
    return jacobian_rank(da, basis.parameters, 10, rng, n) == jacobian_rank(report.invariants, basis.parameters, 10, rng, n);
}

} // namespace psym
