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

#include <psym/numeric.hpp>

#include <cmath>
#include <algorithm>
#include <cstdio>

#include <psym/errors.hpp>

namespace psym {

CompiledPolynomial::CompiledPolynomial(const Polynomial &p, const std::vector<Variable> &slots)
{
    for (const auto &t : p.terms()) {
        Term ct{to_double(t.coeff), {}};
        for (const auto &f : t.mono.factors()) {
            auto it = std::find(slots.begin(), slots.end(), f.var);
            if (it == slots.end()) {
                throw UnknownVariable("'" + f.var.display() + "' has no numeric value");
            }
            ct.powers.emplace_back(std::size_t(it - slots.begin()), f.exp);
        }
        terms_.push_back(std::move(ct));
    }
}

double CompiledPolynomial::term_value(const Term &t, const double *x)
{
    double v = t.coeff;
    for (const auto &[i, e] : t.powers) {
        double b = x[i];
        for (std::uint32_t k = 0; k < e; ++k) {
            v *= b;
        }
    }
    return v;
}

double CompiledPolynomial::operator()(const double *x) const
{
    double s = 0;
    for (const auto &t : terms_) {
        s += term_value(t, x);
    }
    return s;
}

double CompiledPolynomial::magnitude(const double *x) const
{
    double s = 0;
    for (const auto &t : terms_) {
        s = std::max(s, std::fabs(term_value(t, x)));
    }
    return s;
}

CompiledFunction::CompiledFunction(const RationalFunction &f, const std::vector<Variable> &slots)
    : num_(f.numerator(), slots), den_(f.denominator(), slots)
{
}

double to_double(const BigRational &q) { return q.get_d(); }

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace psym
