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

// Floating-point evaluation of exact expressions over a fixed slot layout.

#ifndef PSYM_NUMERIC_HPP
#define PSYM_NUMERIC_HPP

#include <vector>

#include <psym/algebra.hpp>

namespace psym {

class CompiledPolynomial {
public:
    CompiledPolynomial() = default;
    // Throws UnknownVariable for a variable outside `slots`.
    CompiledPolynomial(const Polynomial &p, const std::vector<Variable> &slots);

    double operator()(const double *x) const;
    // Largest |term| value, the scale used for normalized residuals.
    double magnitude(const double *x) const;
    bool is_zero() const { return terms_.empty(); }

private:
    struct Term {
        double coeff;
        std::vector<std::pair<std::size_t, std::uint32_t>> powers;
    };
    static double term_value(const Term &t, const double *x);
    std::vector<Term> terms_;
};

class CompiledFunction {
public:
    CompiledFunction() = default;
    CompiledFunction(const RationalFunction &f, const std::vector<Variable> &slots);

    double operator()(const double *x) const { return num_(x) / den_(x); }
    double numerator(const double *x) const { return num_(x); }
    double denominator(const double *x) const { return den_(x); }

private:
    CompiledPolynomial num_, den_;
};

double to_double(const BigRational &q);

// 17 significant digits, enough to round-trip binary64.
std::string format_double(double v);

} // namespace psym

#endif
