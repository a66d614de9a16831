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


// The full analysis pipeline and its reports (JSON and text).

#ifndef PSYM_REPORT_HPP
#define PSYM_REPORT_HPP

#include <string>
#include <vector>

#include <psym/invariants.hpp>
#include <psym/reduction.hpp>
#include <psym/symcond.hpp>
#include <psym/verify.hpp>

namespace psym {

inline constexpr int kReportSchemaVersion = 1;

struct StageTiming {
    std::string stage;
    double seconds = 0;
};

struct AnalysisReport {
    std::string model;
    OutputSystem io;
    bool io_supplied = false; // read from a file instead of eliminated
    ConditionMatrix matrix;
    GeneratorBasis basis;
    InvariantReport invariants;
    std::vector<RationalFunction> da_coefficients;
    bool cross_check = false;
    std::vector<StageTiming> timings;
};

// reduce -> symmetry conditions -> null space -> invariants -> cross-check.
// With `io` the elimination stage is skipped. Throws EliminationFailed.
AnalysisReport analyze(const ModelSpec &spec, const AnsatzConfig &config = {}, const OutputSystem *io = nullptr);

std::string report_json(const AnalysisReport &r, bool timing = true);
std::string report_text(const AnalysisReport &r);

std::string matrix_json(const ConditionMatrix &m);
std::string basis_json(const GeneratorBasis &b);
std::string invariants_json(const InvariantReport &r);
std::string certificate_json(const ResidualCertificate &c, const ModelSpec &spec);

} // namespace psym

#endif
