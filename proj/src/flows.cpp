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

#include <psym/flows.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include <psym/model.hpp>
#include <psym/numeric.hpp>

namespace psym {

namespace {

using Vec = std::vector<double>;

struct Field {
    std::vector<CompiledFunction> chi;
    const FlowOptions &opt;
    std::size_t id;

    Vec operator()(const Vec &x) const
    {
        Vec d(x.size());
        for (std::size_t l = 0; l < x.size(); ++l) {
            double den = chi[l].denominator(x.data());
            if (den == 0) {
                throw BlowUp("trajectory " + std::to_string(id) + ": infinitesimal has a pole");
            }
            d[l] = chi[l].numerator(x.data()) / den;
        }
        return d;
    }

    void admissible(const Vec &x) const
    {
        for (double v : x) {
            if (!std::isfinite(v) || std::fabs(v) > opt.blowup) {
                throw BlowUp("trajectory " + std::to_string(id) + ": parameter exceeds " + format_double(opt.blowup));
            }
            if (opt.require_positive && !(v > 0)) {
                throw BlowUp("trajectory " + std::to_string(id) + ": parameter left the positive orthant");
            }
        }
    }
};

Vec rk4(const Field &f, Vec y, double h, std::size_t steps)
{
    const std::size_t n = y.size();
    Vec tmp(n);
    for (std::size_t s = 0; s < steps; ++s) {
        Vec k1 = f(y);
        for (std::size_t i = 0; i < n; ++i) {
            tmp[i] = y[i] + 0.5 * h * k1[i];
        }
        Vec k2 = f(tmp);
        for (std::size_t i = 0; i < n; ++i) {
            tmp[i] = y[i] + 0.5 * h * k2[i];
        }
        Vec k3 = f(tmp);
        for (std::size_t i = 0; i < n; ++i) {
            tmp[i] = y[i] + h * k3[i];
        }
        Vec k4 = f(tmp);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        }
        f.admissible(y);
    }
    return y;
}

// Integrates one grid segment with step <= h_max, halving until the
// step-halving error estimate per unit eps is below tolerance.
Vec segment(const Field &f, const Vec &y, double from, double to, double h_max)
{
    const double len = std::fabs(to - from);
    std::size_t n = std::max<std::size_t>(1, std::size_t(std::ceil(len / h_max)));
    for (int level = 0;; ++level) {
        double h = (to - from) / double(n);
        Vec coarse = rk4(f, y, h, n);
        Vec fine = rk4(f, y, h / 2, 2 * n);
        double err = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            err = std::max(err, std::fabs(fine[i] - coarse[i]) / 15 / std::max(1.0, std::fabs(fine[i])));
        }
        if (err <= f.opt.richardson_tol * len || level >= 12) {
            return fine;
        }
        n *= 2;
    }
}

} // namespace

GeneratorInstance::GeneratorInstance(GeneratorBasis b, std::vector<BigRational> a) : basis(std::move(b)), alpha(std::move(a))
{
    if (alpha.size() != basis.dimension()) {
        throw InvalidArgument("expected " + std::to_string(basis.dimension()) + " alpha weights, got " +
                              std::to_string(alpha.size()));
    }
}

std::vector<RationalFunction> GeneratorInstance::infinitesimal() const
{
    std::vector<RationalFunction> out(basis.parameters.size());
    for (std::size_t k = 0; k < alpha.size(); ++k) {
        if (alpha[k] == 0) {
            continue;
        }
        for (std::size_t l = 0; l < out.size(); ++l) {
            out[l] += basis.vectors[k][l] * RationalFunction(alpha[k]);
        }
    }
    return out;
}

const char *to_string(ComponentKind k)
{
    switch (k) {
    case ComponentKind::Zero:
        return "zero";
    case ComponentKind::Translation:
        return "translation";
    case ComponentKind::Scaling:
        return "scaling";
    case ComponentKind::General:
        break;
    }
    return "general";
}

const char *to_string(FlowMethod m) { return m == FlowMethod::ClosedForm ? "closed_form" : "rk4"; }

ComponentClass classify_component(const GeneratorInstance &inst, Variable param)
{
    const auto &ps = inst.basis.parameters;
    auto it = std::find(ps.begin(), ps.end(), param);
    if (it == ps.end()) {
        throw UnknownVariable("'" + param.display() + "' is not a parameter of the basis");
    }
    RationalFunction c = inst.infinitesimal()[std::size_t(it - ps.begin())];
    if (c.is_zero()) {
        return {ComponentKind::Zero, 0};
    }
    if (c.is_constant()) {
        return {ComponentKind::Translation, c.constant_value()};
    }
    RationalFunction ratio = c / RationalFunction(param);
    if (ratio.is_constant()) {
        return {ComponentKind::Scaling, ratio.constant_value()};
    }
    return {ComponentKind::General, 0};
}

FlowTrajectory flow(const GeneratorInstance &inst, const std::vector<BigRational> &theta0,
                    const std::vector<double> &eps_grid, const FlowOptions &options, std::size_t id)
{
    const auto &ps = inst.basis.parameters;
    if (theta0.size() != ps.size()) {
        throw InvalidArgument("theta0 has " + std::to_string(theta0.size()) + " entries, expected " +
                              std::to_string(ps.size()));
    }
    if (eps_grid.empty() || !std::is_sorted(eps_grid.begin(), eps_grid.end()) ||
        std::adjacent_find(eps_grid.begin(), eps_grid.end()) != eps_grid.end()) {
        throw InvalidArgument("eps grid must be strictly increasing");
    }
    auto zero = std::find(eps_grid.begin(), eps_grid.end(), 0.0);
    if (zero == eps_grid.end()) {
        throw InvalidArgument("eps grid must contain 0");
    }
    if (options.require_positive) {
        for (const auto &q : theta0) {
            if (q <= 0) {
                throw InvalidArgument("starting parameters must be positive");
            }
        }
    }

    FlowTrajectory traj;
    traj.id = id;
    traj.epsilons = eps_grid;
    traj.start = theta0;
    Vec y0;
    for (const auto &q : theta0) {
        y0.push_back(to_double(q));
    }
    traj.points.assign(eps_grid.size(), y0);

    std::vector<ComponentClass> kinds;
    bool closed = !options.force_numeric;
    for (auto p : ps) {
        kinds.push_back(classify_component(inst, p));
        closed = closed && kinds.back().kind != ComponentKind::General;
    }
    Field field{{}, options, id};

    if (closed) {
        traj.method = FlowMethod::ClosedForm;
        for (std::size_t i = 0; i < eps_grid.size(); ++i) {
            double e = eps_grid[i];
            if (e == 0) {
                continue;
            }
            for (std::size_t l = 0; l < ps.size(); ++l) {
                double r = to_double(kinds[l].rate);
                if (kinds[l].kind == ComponentKind::Translation) {
                    traj.points[i][l] = y0[l] + r * e;
                } else if (kinds[l].kind == ComponentKind::Scaling) {
                    traj.points[i][l] = y0[l] * std::exp(r * e);
                }
            }
            field.admissible(traj.points[i]);
        }
        return traj;
    }

    traj.method = FlowMethod::RK4;
    auto chi = inst.infinitesimal();
    for (const auto &c : chi) {
        field.chi.emplace_back(c, ps);
    }
    const double span = eps_grid.back() - eps_grid.front();
    const double h_max = 1e-3 * span;
    const std::size_t z = std::size_t(zero - eps_grid.begin());
    Vec y = y0;
    for (std::size_t i = z + 1; i < eps_grid.size(); ++i) {
        y = segment(field, y, eps_grid[i - 1], eps_grid[i], h_max);
        traj.points[i] = y;
    }
    y = y0;
    for (std::size_t i = z; i-- > 0;) {
        y = segment(field, y, eps_grid[i + 1], eps_grid[i], h_max);
        traj.points[i] = y;
    }
    return traj;
}

std::vector<std::vector<BigRational>> seeded_starts(const GeneratorInstance &inst, const std::vector<double> &grid,
                                                    std::size_t count, std::uint64_t seed, const FlowOptions &options)
{
    // Entries k/100 first; if flows from there leave the admissible set too
    // often (translations need theta > |eps|), the range widens tenfold.
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(5, 95);
    std::vector<std::vector<BigRational>> out;
    for (int scale : {100, 10, 1}) {
        for (int draw = 0; draw < 400 && out.size() < count; ++draw) {
            std::vector<BigRational> th;
            for (std::size_t l = 0; l < inst.basis.parameters.size(); ++l) {
                BigRational q(pick(rng), scale);
                q.canonicalize();
                th.push_back(q);
            }
            try {
                flow(inst, th, grid, options);
                out.push_back(std::move(th));
            } catch (const BlowUp &) {
            }
        }
    }
    if (out.size() < count) {
        throw InvalidArgument("found only " + std::to_string(out.size()) + " of " + std::to_string(count) +
                              " starting points whose flow stays admissible over eps in [" +
                              format_double(grid.front()) + ", " + format_double(grid.back()) +
                              "]; narrow the eps range, change alpha or give a start explicitly");
    }
    return out;
}

std::vector<double> eps_grid(double lo, double hi, std::size_t n)
{
    if (hi < lo) {
        throw InvalidArgument("eps range is empty");
    }
    std::vector<double> g;
    if (lo == hi || n < 2) {
        g.push_back(lo);
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            g.push_back(i + 1 == n ? hi : lo + (hi - lo) * double(i) / double(n - 1));
        }
    }
    g.push_back(0.0);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

std::string emit_projection(const std::vector<FlowTrajectory> &trajs, const std::vector<std::string> &coords,
                            const std::vector<Variable> &parameters)
{
    SymbolResolver resolve = [&](const std::string &name, unsigned primes) -> std::optional<Variable> {
        if (primes != 0) {
            return std::nullopt;
        }
        for (auto p : parameters) {
            if (p.name() == name) {
                return p;
            }
        }
        return std::nullopt;
    };
    std::vector<CompiledFunction> fs;
    for (const auto &c : coords) {
        try {
            fs.emplace_back(parse_expression(c, resolve), parameters);
        } catch (const Error &e) {
            throw UnknownCoordinate("coordinate '" + c + "': " + e.what());
        }
    }
    std::string out = "eps";
    for (const auto &c : coords) {
        out += "," + c;
    }
    out += ",traj_id\n";
    for (const auto &t : trajs) {
        for (std::size_t i = 0; i < t.epsilons.size(); ++i) {
            out += format_double(t.epsilons[i]);
            for (const auto &f : fs) {
                out += "," + format_double(f(t.points[i].data()));
            }
            out += "," + std::to_string(t.id) + "\n";
        }
    }
    return out;
}

} // namespace psym
