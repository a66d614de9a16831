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

#include <psym/reduction.hpp>

#include <fstream>
#include <optional>
#include <sstream>

namespace psym {

namespace {

const std::set<VarKind> kJetKinds = {VarKind::Time, VarKind::OutputJet, VarKind::Input};

// Total derivative where each state derivative is given explicitly; output and
// input jets advance by one order.
RationalFunction total_derivative(const RationalFunction &e, const ModelSpec &spec,
                                  const std::vector<RationalFunction> &state_dot)
{
    RationalFunction res;
    for (Variable v : e.variables()) {
        switch (v.kind()) {
        case VarKind::Time:
            res += e.derivative(v);
            break;
        case VarKind::State: {
            auto i = spec.state_index(v);
            if (!i) {
                throw UnknownVariable("state '" + v.name() + "' is not part of the model");
            }
            if (!state_dot[*i].is_zero()) {
                res += state_dot[*i] * e.derivative(v);
            }
            break;
        }
        case VarKind::Input:
        case VarKind::OutputJet:
            res += RationalFunction(v.with_order(v.order() + 1)) * e.derivative(v);
            break;
        case VarKind::Parameter:
        case VarKind::AnsatzCoeff:
            break;
        }
    }
    return res;
}

std::uint32_t output_jet_order(const RationalFunction &f)
{
    std::uint32_t k = 0;
    for (Variable v : f.variables()) {
        if (v.kind() == VarKind::OutputJet) {
            k = std::max(k, v.order());
        }
    }
    return k;
}

struct PoolEq {
    std::size_t output;
    std::uint32_t order;
    RationalFunction eq;
    bool consumed = false;
};

// Removes the rational content and the parameter-monomial part of the content
// with respect to the jet variables, then orients the equation so that the
// coefficient of the leading variable has a positive leading coefficient.
Polynomial normalize_equation(const Polynomial &p, Variable lead)
{
    Polynomial n = p.primitive_part();
    auto parts = collect_by_monomials(n, kJetKinds);
    Monomial common;
    bool first = true;
    for (const auto &[key, coeff] : parts) {
        Monomial m = coeff.monomial_content();
        common = first ? m : Monomial::gcd(common, m);
        first = false;
    }
    n = n.divided_by_monomial(common);
    auto coeffs = n.coefficients_in(lead);
    if (coeffs.size() != 2) {
        throw LeadingNotLinear("equation is not linear in its leading derivative " + lead.display());
    }
    if (coeffs[1].leading_coeff() < 0) {
        n = -n;
    }
    return n;
}

} // namespace

std::pair<Polynomial, Polynomial> OutputSystem::split_leading(std::size_t j) const
{
    auto c = equations[j].coefficients_in(leading[j]);
    Polynomial b = c.empty() ? Polynomial() : c[0];
    Polynomial a = c.size() > 1 ? c[1] : Polynomial();
    return {a, b};
}

RationalFunction lie_derivative(const RationalFunction &e, const ModelSpec &spec)
{
    for (Variable v : e.variables()) {
        if (v.kind() == VarKind::OutputJet || v.kind() == VarKind::AnsatzCoeff) {
            throw InvalidArgument("Lie derivative of an expression containing '" + v.display() + "'");
        }
    }
    return total_derivative(e, spec, spec.rhs);
}

std::string EliminationTrace::str() const
{
    std::ostringstream os;
    for (const auto &s : steps) {
        os << "solved " << s.state.name() << " from " << s.output << std::string(s.order, '\'') << ": "
           << s.state.name() << " = " << s.solution.str() << '\n';
    }
    for (auto v : unsolved) {
        os << (success ? "not needed: " : "unsolved: ") << v.name() << '\n';
    }
    return os.str();
}

OutputSystem make_output_system(const std::vector<RationalFunction> &equations, const std::vector<Variable> &leading,
                                const ModelSpec &spec)
{
    if (equations.size() != leading.size()) {
        throw InvalidArgument("one leading variable per equation is required");
    }
    OutputSystem io;
    io.parameters = spec.parameters;
    for (std::size_t j = 0; j < equations.size(); ++j) {
        Variable lead = leading[j];
        if (lead.kind() != VarKind::OutputJet) {
            throw InvalidArgument("leading variable must be an output derivative");
        }
        if (equations[j].denominator().contains(lead)) {
            throw LeadingNotLinear("leading derivative " + lead.display() + " occurs in a denominator");
        }
        for (Variable v : equations[j].variables()) {
            if (v.kind() == VarKind::State || v.kind() == VarKind::AnsatzCoeff) {
                throw UnknownVariable("input-output equation contains '" + v.display() + "'");
            }
        }
        Polynomial eq = normalize_equation(equations[j].numerator(), lead);
        io.equations.push_back(eq);
        io.leading.push_back(lead);
        auto c = eq.coefficients_in(lead);
        io.normal_rhs.push_back(RationalFunction(-c[0], c[1]));
        auto &ord = io.orders[lead.name()];
        ord = std::max(ord, lead.order());
    }
    return io;
}

Reduction reduce_to_io(const ModelSpec &spec)
{
    const std::size_t n = spec.states.size();
    const std::size_t m = spec.outputs.size();
    EliminationTrace trace;
    std::map<Variable, RationalFunction> sol;
    std::vector<RationalFunction> raw(m);
    std::vector<bool> finished(m, false);
    std::vector<RationalFunction> delta(m);
    std::vector<std::uint32_t> delta_order(m, 0);
    std::vector<PoolEq> pool;

    auto all_finished = [&] {
        for (bool f : finished) {
            if (!f) {
                return false;
            }
        }
        return true;
    };

    for (std::uint32_t k = 0; k <= n && !all_finished(); ++k) {
        if (k > 0) {
            // Derivatives of solved states whose solution is low enough in jet
            // order are taken along the solution; this keeps the output
            // relations free of spurious combinations of each other.
            std::vector<RationalFunction> dot = spec.rhs;
            for (std::size_t i = 0; i < n; ++i) {
                auto it = sol.find(spec.states[i]);
                if (it == sol.end() || it->second.contains_kind(VarKind::State)) {
                    continue;
                }
                if (k >= 2 && output_jet_order(it->second) <= k - 2) {
                    dot[i] = total_derivative(it->second, spec, spec.rhs);
                }
            }
            for (std::size_t j = 0; j < m; ++j) {
                if (!finished[j]) {
                    raw[j] = total_derivative(raw[j], spec, dot);
                }
            }
        } else {
            for (std::size_t j = 0; j < m; ++j) {
                raw[j] = spec.outputs[j].expr;
            }
        }
        for (std::size_t j = 0; j < m; ++j) {
            if (finished[j]) {
                continue;
            }
            Variable yk = Variable::output_jet(spec.outputs[j].name, k);
            RationalFunction e = RationalFunction(yk) - raw[j].substitute(sol);
            pool.push_back({j, k, e});
        }

        for (;;) {
            for (auto &p : pool) {
                if (p.consumed || p.eq.contains_kind(VarKind::State)) {
                    continue;
                }
                p.consumed = true;
                if (!p.eq.is_zero() && !finished[p.output]) {
                    finished[p.output] = true;
                    delta[p.output] = p.eq;
                    delta_order[p.output] = p.order;
                }
            }
            if (all_finished()) {
                break;
            }

            std::optional<std::size_t> pick;
            Variable x;
            for (Variable s : spec.states) {
                if (sol.count(s)) {
                    continue;
                }
                std::size_t best_terms = 0;
                for (std::size_t q = 0; q < pool.size(); ++q) {
                    const auto &p = pool[q];
                    if (p.consumed || p.eq.denominator().contains(s) || p.eq.numerator().degree_in(s) != 1) {
                        continue;
                    }
                    Polynomial a = p.eq.numerator().coefficients_in(s)[1];
                    if (a.contains_kind(VarKind::State)) {
                        continue;
                    }
                    if (!pick || a.term_count() < best_terms) {
                        pick = q;
                        best_terms = a.term_count();
                    }
                }
                if (pick) {
                    x = s;
                    break;
                }
            }
            if (!pick) {
                break;
            }
            PoolEq &src = pool[*pick];
            auto c = src.eq.numerator().coefficients_in(x);
            RationalFunction value(-c[0], c[1]);
            for (auto &[v, g] : sol) {
                g = g.substitute(x, value);
            }
            sol.emplace(x, value);
            src.consumed = true;
            for (auto &p : pool) {
                if (!p.consumed) {
                    p.eq = p.eq.substitute(x, value);
                }
            }
            trace.steps.push_back({x, spec.outputs[src.output].name, src.order, value});
        }
    }
    // Report final (fully back-substituted) solutions in the trace.
    for (auto &s : trace.steps) {
        s.solution = sol.at(s.state);
    }
    for (Variable s : spec.states) {
        if (!sol.count(s)) {
            trace.unsolved.push_back(s);
        }
    }
    if (!all_finished()) {
        std::string missing;
        for (std::size_t j = 0; j < m; ++j) {
            if (!finished[j]) {
                missing += (missing.empty() ? "" : ", ") + spec.outputs[j].name;
            }
        }
        trace.success = false;
        throw EliminationError("state elimination failed for output(s) " + missing +
                                   ": the system is not triangularly solvable with degree-1 solves; "
                                   "supply the input-output equations with --io\n" +
                                   trace.str(),
                               trace);
    }
    trace.success = true;
    std::vector<Variable> leads;
    for (std::size_t j = 0; j < m; ++j) {
        leads.push_back(Variable::output_jet(spec.outputs[j].name, delta_order[j]));
    }
    return Reduction{make_output_system(delta, leads, spec), trace};
}

OutputSystem load_io(std::string_view source, const ModelSpec &spec)
{
    std::map<std::string, VarKind> names;
    for (const auto &o : spec.outputs) {
        names[o.name] = VarKind::OutputJet;
    }
    for (auto v : spec.inputs) {
        names[v.name()] = VarKind::Input;
    }
    for (auto v : spec.parameters) {
        names[v.name()] = VarKind::Parameter;
    }
    std::string unknown;
    SymbolResolver resolve = [&](const std::string &name, unsigned primes) -> std::optional<Variable> {
        auto it = names.find(name);
        if (name == "t" && primes == 0) {
            return Variable::time();
        }
        if (it == names.end() || (primes > 0 && it->second == VarKind::Parameter)) {
            unknown = name + std::string(primes, '\'');
            return std::nullopt;
        }
        return Variable::make(it->second, name, it->second == VarKind::Parameter ? 0 : primes);
    };

    std::vector<RationalFunction> eqs;
    std::vector<Variable> leads;
    Variable pending;
    std::istringstream in{std::string(source)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (auto h = line.find('#'); h != std::string::npos) {
            line.erase(h);
        }
        std::istringstream words(line);
        std::string first;
        if (!(words >> first)) {
            continue;
        }
        std::string where = "line " + std::to_string(lineno) + ": ";
        if (first == "lead") {
            std::string out;
            long order = -1;
            std::string extra;
            if (!(words >> out >> order) || order < 0 || (words >> extra)) {
                throw ParseError(where + "expected 'lead <output> <order>'");
            }
            if (!spec.output_index(out)) {
                throw UnknownVariable(where + "'" + out + "' is not an output of the model");
            }
            pending = Variable::output_jet(out, std::uint32_t(order));
            continue;
        }
        std::string lhs = line, rhs = "0";
        if (auto eq = line.find('='); eq != std::string::npos) {
            lhs = line.substr(0, eq);
            rhs = line.substr(eq + 1);
        }
        ExpressionError err;
        unknown.clear();
        auto l = try_parse_expression(lhs, resolve, err);
        std::optional<RationalFunction> r;
        if (l) {
            r = try_parse_expression(rhs, resolve, err);
        }
        if (!l || !r) {
            if (!unknown.empty()) {
                throw UnknownVariable(where + "unknown variable '" + unknown + "'");
            }
            throw ParseError(where + err.message);
        }
        RationalFunction delta = *l - *r;
        Variable lead;
        if (pending.valid()) {
            lead = pending;
            pending = Variable();
        } else {
            for (const auto &o : spec.outputs) {
                std::optional<std::uint32_t> best;
                for (Variable v : delta.variables()) {
                    if (v.kind() == VarKind::OutputJet && v.name() == o.name && (!best || v.order() > *best)) {
                        best = v.order();
                    }
                }
                if (best) {
                    lead = Variable::output_jet(o.name, *best);
                    break;
                }
            }
            if (!lead.valid()) {
                throw LeadingNotLinear(where + "equation contains no output variable");
            }
        }
        if (delta.numerator().degree_in(lead) != 1 || delta.denominator().contains(lead)) {
            throw LeadingNotLinear(where + "equation is not linear in " + lead.display());
        }
        eqs.push_back(delta);
        leads.push_back(lead);
    }
    if (eqs.empty()) {
        throw ParseError("no input-output equations given");
    }
    return make_output_system(eqs, leads, spec);
}

OutputSystem load_io_file(const std::string &path, const ModelSpec &spec)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidArgument("cannot open input-output file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_io(ss.str(), spec);
}

std::vector<BigRational> residual(const OutputSystem &io, const Assignment &jet_point)
{
    std::vector<BigRational> out;
    out.reserve(io.equations.size());
    for (const auto &e : io.equations) {
        out.push_back(e.evaluate(jet_point));
    }
    return out;
}

RationalFunction substitute_outputs(const Polynomial &p, const ModelSpec &spec)
{
    std::map<Variable, RationalFunction> values;
    std::map<std::string, std::uint32_t> need;
    for (Variable v : p.variables()) {
        if (v.kind() == VarKind::OutputJet) {
            auto &k = need[v.name()];
            k = std::max(k, v.order());
        }
    }
    for (const auto &[name, top] : need) {
        auto idx = spec.output_index(name);
        if (!idx) {
            throw UnknownVariable("'" + name + "' is not an output of the model");
        }
        RationalFunction e = spec.outputs[*idx].expr;
        for (std::uint32_t k = 0; k <= top; ++k) {
            values.emplace(Variable::output_jet(name, k), e);
            if (k < top) {
                e = lie_derivative(e, spec);
            }
        }
    }
    return RationalFunction(p).substitute(values);
}

std::string to_string(const OutputSystem &io)
{
    std::ostringstream os;
    for (std::size_t j = 0; j < io.equations.size(); ++j) {
        os << io.equations[j].str() << " = 0    [leading " << io.leading[j].display() << "]\n";
    }
    return os.str();
}

} // namespace psym
