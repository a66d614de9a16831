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


#include <psym/report.hpp>

#include <chrono>
#include <cmath>

#include <json.hpp>

#include <psym/nullspace.hpp>
#include <psym/numeric.hpp>

namespace psym {

namespace {

using Json = nlohmann::ordered_json;

Json names(const std::vector<Variable> &vs)
{
    Json a = Json::array();
    for (auto v : vs) {
        a.push_back(v.display());
    }
    return a;
}

// Shortest round-trip form; non-finite values (never expected) become null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json matrix_doc(const ConditionMatrix &m)
{
    Json rows = Json::array();
    for (const auto &r : m.rows) {
        Json entries = Json::array();
        for (const auto &e : r.entries) {
            entries.push_back(e.str());
        }
        rows.push_back({{"equation", r.equation}, {"key", r.key.str()}, {"sign", r.sign}, {"entries", entries}});
    }
    return {{"rows", m.row_count()}, {"columns", m.column_count()}, {"parameters", names(m.columns)}, {"entries", rows}};
}

Json basis_doc(const GeneratorBasis &b)
{
    Json vecs = Json::array();
    Json gens = Json::array();
    for (std::size_t k = 0; k < b.vectors.size(); ++k) {
        Json v = Json::array();
        for (const auto &c : b.vectors[k]) {
            v.push_back(c.str());
        }
        vecs.push_back(v);
        gens.push_back(generator_string(b, k));
    }
    return {{"dimension", b.dimension()}, {"parameters", names(b.parameters)}, {"vectors", vecs}, {"generators", gens}};
}

Json invariants_doc(const InvariantReport &r)
{
    Json invs = Json::array();
    for (const auto &f : r.invariants) {
        invs.push_back(invariant_string(f));
    }
    Json verdicts = Json::object();
    for (const auto &[p, v] : r.verdicts) {
        verdicts[p.display()] = to_string(v);
    }
    return {{"invariants", invs},
            {"identifiable", names(r.identifiable)},
            {"verdicts", verdicts},
            {"model_verdict", to_string(r.model_verdict)},
            {"independence_rank", r.independence_rank},
            {"expected_rank", r.expected_rank},
            {"incomplete", r.incomplete}};
}

Json io_doc(const OutputSystem &io, bool supplied)
{
    Json eqs = Json::array();
    for (std::size_t j = 0; j < io.equations.size(); ++j) {
        eqs.push_back({{"lead", io.leading[j].display()}, {"equation", io.equations[j].str()}});
    }
    Json orders = Json::object();
    for (const auto &[name, o] : io.orders) {
        orders[name] = o;
    }
    return {{"source", supplied ? "file" : "elimination"}, {"equation_count", io.equations.size()}, {"orders", orders},
            {"equations", eqs}};
}

template <class F> auto timed(std::vector<StageTiming> &log, const char *stage, F &&f)
{
    auto t0 = std::chrono::steady_clock::now();
    auto out = f();
    log.push_back({stage, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
    return out;
}

const char *verdict_phrase(Verdict v)
{
    return v == Verdict::Identifiable ? "globally structurally identifiable" : "not globally structurally identifiable";
}

} // namespace

AnalysisReport analyze(const ModelSpec &spec, const AnsatzConfig &config, const OutputSystem *io)
{
    AnalysisReport r;
    r.model = spec.name;
    r.io_supplied = io != nullptr;
    r.io = io ? *io : timed(r.timings, "reduce", [&] { return reduce_to_io(spec).io; });
    r.matrix = timed(r.timings, "symcond", [&] { return build_matrix(apply_generator(r.io), r.io.parameters); });
    r.basis = timed(r.timings, "nullspace", [&] { return solve_nullspace(r.matrix, config.seed); });
    r.invariants = timed(r.timings, "invariants", [&] { return invariant_report(r.basis, config); });
    r.cross_check = timed(r.timings, "cross_check", [&] {
        r.da_coefficients = da_extract(r.io);
        return cross_check(r.da_coefficients, r.invariants, r.basis, config.seed);
    });
    return r;
}

std::string report_json(const AnalysisReport &r, bool timing)
{
    Json da = Json::array();
    for (const auto &c : r.da_coefficients) {
        da.push_back(c.str());
    }
    Json doc{{"schema_version", kReportSchemaVersion},
             {"model", r.model},
             {"output_system", io_doc(r.io, r.io_supplied)},
             {"condition_matrix", {{"rows", r.matrix.row_count()}, {"columns", r.matrix.column_count()}}},
             {"basis", basis_doc(r.basis)},
             {"invariant_report", invariants_doc(r.invariants)},
             {"cross_check", {{"coefficients", da}, {"agrees", r.cross_check}}}};
    if (timing) {
        Json t = Json::object();
        for (const auto &s : r.timings) {
            t[s.stage] = number(s.seconds);
        }
        doc["timing_seconds"] = t;
    }
    return doc.dump(2) + "\n";
}

std::string report_text(const AnalysisReport &r)
{
    std::string out = "model " + r.model + "\n\n";
    out += "input-output equations (" + std::string(r.io_supplied ? "from file" : "eliminated") + "):\n";
    for (std::size_t j = 0; j < r.io.equations.size(); ++j) {
        out += "  " + r.io.equations[j].str() + " = 0    [leading " + r.io.leading[j].display() + "]\n";
    }
    out += "\nsymmetry conditions: " + std::to_string(r.matrix.row_count()) + " x " +
           std::to_string(r.matrix.column_count()) + "\n";
    out += "\ngenerators (dimension " + std::to_string(r.basis.dimension()) + "):\n";
    for (std::size_t k = 0; k < r.basis.dimension(); ++k) {
        out += "  X" + std::to_string(k + 1) + " = " + generator_string(r.basis, k) + "\n";
    }
    if (r.basis.dimension() == 0) {
        out += "  (none)\n";
    }
    const auto &inv = r.invariants;
    out += "\nuniversal parameter invariants (independence rank " + std::to_string(inv.independence_rank) + " of " +
           std::to_string(inv.expected_rank) + "):\n";
    for (const auto &f : inv.invariants) {
        out += "  " + invariant_string(f) + "\n";
    }
    if (inv.incomplete) {
        out += "  warning: incomplete invariant set; raise --max-num-degree or --max-den-factors\n";
    }
    out += "\nparameters:\n";
    std::size_t width = 0;
    for (const auto &[p, v] : inv.verdicts) {
        width = std::max(width, p.display().size());
    }
    for (const auto &[p, v] : inv.verdicts) {
        std::string n = p.display();
        out += "  " + n + std::string(width - n.size() + 2, ' ') + verdict_phrase(v) + "\n";
    }
    out += "\nmodel: " + std::string(verdict_phrase(inv.model_verdict)) + "\n";
    out += "cross-check with coefficient extraction: " + std::string(r.cross_check ? "agrees" : "DISAGREES") + "\n";
    return out;
}

std::string matrix_json(const ConditionMatrix &m) { return matrix_doc(m).dump(2) + "\n"; }
std::string basis_json(const GeneratorBasis &b) { return basis_doc(b).dump(2) + "\n"; }
std::string invariants_json(const InvariantReport &r) { return invariants_doc(r).dump(2) + "\n"; }

std::string certificate_json(const ResidualCertificate &c, const ModelSpec &spec)
{
    auto vec = [&](const std::vector<double> &xs) {
        Json o = Json::object();
        for (std::size_t i = 0; i < xs.size() && i < spec.parameters.size(); ++i) {
            o[spec.parameters[i].display()] = number(xs[i]);
        }
        return o;
    };
    Json profile = Json::array();
    for (const auto &eq : c.profile) {
        double m = 0;
        for (double v : eq) {
            m = std::max(m, v);
        }
        profile.push_back(number(m));
    }
    return Json{{"schema_version", kReportSchemaVersion},
                {"model", spec.name},
                {"theta", vec(c.theta)},
                {"theta_hat", vec(c.theta_hat)},
                {"max_normalized_residual", number(c.max_abs_residual)},
                {"per_equation_max", profile},
                {"pass_threshold", number(kResidualPass)},
                {"fail_threshold", number(kResidualFail)},
                {"outcome", to_string(c.outcome)}}
               .dump(2) +
           "\n";
}

} // namespace psym
