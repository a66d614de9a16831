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

// Exact arithmetic kernel: variables, sparse multivariate polynomials over Q
// and canonical rational functions.
//
// Canonical forms are the contract everything downstream relies on: two
// Polynomials (or RationalFunctions) compare equal iff they are equal as
// mathematical objects. Terms are kept in strictly decreasing graded-lex order
// over the fixed Variable ordering; a RationalFunction has coprime numerator
// and denominator, and its denominator is a primitive integer polynomial with
// positive leading coefficient.

#ifndef PSYM_ALGEBRA_HPP
#define PSYM_ALGEBRA_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include <psym/errors.hpp>

namespace psym {

using BigInt = mpz_class;
using BigRational = mpq_class;

enum class VarKind : std::uint8_t { Time, State, Parameter, Input, OutputJet, AnsatzCoeff };

const char *to_string(VarKind kind);

namespace detail {
struct VarRecord;
}

// Interned handle. Equality is identity of the (kind, name, order) triple;
// ordering is kind, then name, then jet order.
class Variable {
public:
    Variable() = default;

    static Variable make(VarKind kind, std::string_view name, std::uint32_t order = 0);
    static Variable time();
    static Variable state(std::string_view name) { return make(VarKind::State, name); }
    static Variable parameter(std::string_view name) { return make(VarKind::Parameter, name); }
    static Variable input(std::string_view name, std::uint32_t order = 0) { return make(VarKind::Input, name, order); }
    static Variable output_jet(std::string_view name, std::uint32_t order = 0)
    {
        return make(VarKind::OutputJet, name, order);
    }
    static Variable ansatz(std::string_view name) { return make(VarKind::AnsatzCoeff, name); }

    bool valid() const { return rec_ != nullptr; }
    VarKind kind() const;
    const std::string &name() const;
    std::uint32_t order() const;

    bool is_jet() const { return kind() == VarKind::OutputJet || kind() == VarKind::Input; }
    // Same base variable, different derivative order. Only meaningful for jets.
    Variable with_order(std::uint32_t order) const;

    // Name with one apostrophe per derivative order, e.g. y''.
    std::string display() const;

    friend bool operator==(Variable a, Variable b) { return a.rec_ == b.rec_; }
    friend std::strong_ordering operator<=>(Variable a, Variable b);

    std::size_t hash() const { return std::hash<const void *>{}(rec_); }

private:
    explicit Variable(const detail::VarRecord *rec) : rec_(rec) {}
    const detail::VarRecord *rec_ = nullptr;
};

struct VarPower {
    Variable var;
    std::uint32_t exp;
    friend bool operator==(const VarPower &, const VarPower &) = default;
};

// Power product with factors sorted by decreasing variable.
class Monomial {
public:
    Monomial() = default;
    static Monomial of(Variable v, std::uint32_t exp = 1);
    static Monomial from_powers(std::vector<VarPower> powers);

    bool is_one() const { return factors_.empty(); }
    std::uint64_t total_degree() const { return degree_; }
    std::uint32_t degree_in(Variable v) const;
    const std::vector<VarPower> &factors() const { return factors_; }

    Monomial operator*(const Monomial &other) const;
    bool divides(const Monomial &other) const;
    // Exact quotient; throws NotExactDivision when this does not divide other.
    Monomial quotient_of(const Monomial &other) const;
    Monomial without(Variable v) const;
    // Keep only the factors whose variable satisfies pred.
    Monomial filter(const std::function<bool(Variable)> &pred) const;

    static Monomial gcd(const Monomial &a, const Monomial &b);

    std::string str() const;

    friend bool operator==(const Monomial &a, const Monomial &b)
    {
        return a.degree_ == b.degree_ && a.factors_ == b.factors_;
    }
    // Graded lexicographic: total degree, then exponent of the largest variable.
    friend std::strong_ordering operator<=>(const Monomial &a, const Monomial &b);

private:
    std::vector<VarPower> factors_;
    std::uint64_t degree_ = 0;
};

struct Term {
    Monomial mono;
    BigRational coeff;
};

using Assignment = std::map<Variable, BigRational>;

class Polynomial {
public:
    Polynomial() = default;
    Polynomial(const BigRational &c);
    Polynomial(long c) : Polynomial(BigRational(c)) {}
    Polynomial(int c) : Polynomial(BigRational(c)) {}
    explicit Polynomial(Variable v);
    Polynomial(const BigRational &c, Monomial m);

    // Sorts, merges equal monomials and drops zeros.
    static Polynomial from_terms(std::vector<Term> terms);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
    bool is_monomial() const { return terms_.size() == 1; }
    BigRational constant_value() const; // requires is_constant()
    std::size_t term_count() const { return terms_.size(); }
    const std::vector<Term> &terms() const { return terms_; }
    const Term &leading_term() const { return terms_.front(); }
    const BigRational &leading_coeff() const { return terms_.front().coeff; }
    BigRational coeff_of(const Monomial &m) const;

    std::uint64_t total_degree() const;
    std::uint32_t degree_in(Variable v) const;
    std::set<Variable> variables() const;
    bool contains(Variable v) const;
    bool contains_kind(VarKind k) const;
    // Smallest monomial dividing every term (exponent-wise minimum).
    Monomial monomial_content() const;

    Polynomial operator-() const;
    Polynomial operator+(const Polynomial &o) const;
    Polynomial operator-(const Polynomial &o) const;
    Polynomial operator*(const Polynomial &o) const;
    Polynomial &operator+=(const Polynomial &o) { return *this = *this + o; }
    Polynomial &operator-=(const Polynomial &o) { return *this = *this - o; }
    Polynomial &operator*=(const Polynomial &o) { return *this = *this * o; }
    Polynomial scaled(const BigRational &c) const;
    Polynomial times_monomial(const Monomial &m) const;
    Polynomial divided_by_monomial(const Monomial &m) const; // exact
    Polynomial pow(std::uint32_t e) const;

    // Exact multivariate division; throws NotExactDivision if b does not divide *this.
    Polynomial divide_exact(const Polynomial &b) const;
    std::optional<Polynomial> try_divide(const Polynomial &b) const;

    Polynomial derivative(Variable v) const;

    // Univariate view: element k is the coefficient of v^k.
    std::vector<Polynomial> coefficients_in(Variable v) const;
    static Polynomial from_coefficients_in(Variable v, const std::vector<Polynomial> &coeffs);

    // Rational content carrying the sign of the leading coefficient, and the
    // matching primitive integer polynomial with positive leading coefficient;
    // *this == content * primitive.
    BigRational content() const;
    Polynomial primitive_part() const;

    BigRational evaluate(const Assignment &point) const;
    Polynomial substitute(Variable v, const Polynomial &value) const;
    Polynomial substitute(const Assignment &partial) const;

    std::string str() const;

    friend bool operator==(const Polynomial &a, const Polynomial &b);

private:
    std::vector<Term> terms_; // strictly decreasing monomials, nonzero coefficients
};

// Greatest common divisor over Q[vars], normalized to a primitive integer
// polynomial with positive leading coefficient. gcd(0, 0) = 0.
Polynomial gcd(const Polynomial &a, const Polynomial &b);
Polynomial lcm(const Polynomial &a, const Polynomial &b);

class RationalFunction {
public:
    RationalFunction() : den_(1) {}
    RationalFunction(const Polynomial &p) : num_(p), den_(1) {}
    RationalFunction(const BigRational &c) : num_(c), den_(1) {}
    RationalFunction(long c) : RationalFunction(BigRational(c)) {}
    RationalFunction(int c) : RationalFunction(BigRational(c)) {}
    explicit RationalFunction(Variable v) : num_(v), den_(1) {}
    // Throws DivisionByZero when den is zero.
    RationalFunction(const Polynomial &num, const Polynomial &den);

    const Polynomial &numerator() const { return num_; }
    const Polynomial &denominator() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_constant(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    BigRational constant_value() const;
    std::set<Variable> variables() const;
    bool contains(Variable v) const { return num_.contains(v) || den_.contains(v); }
    bool contains_kind(VarKind k) const { return num_.contains_kind(k) || den_.contains_kind(k); }
    std::size_t term_count() const { return num_.term_count() + den_.term_count(); }

    RationalFunction operator-() const;
    RationalFunction operator+(const RationalFunction &o) const;
    RationalFunction operator-(const RationalFunction &o) const;
    RationalFunction operator*(const RationalFunction &o) const;
    RationalFunction operator/(const RationalFunction &o) const;
    RationalFunction &operator+=(const RationalFunction &o) { return *this = *this + o; }
    RationalFunction &operator-=(const RationalFunction &o) { return *this = *this - o; }
    RationalFunction &operator*=(const RationalFunction &o) { return *this = *this * o; }
    RationalFunction &operator/=(const RationalFunction &o) { return *this = *this / o; }
    RationalFunction pow(std::int64_t e) const;
    RationalFunction reciprocal() const;

    RationalFunction derivative(Variable v) const;
    BigRational evaluate(const Assignment &point) const;
    RationalFunction substitute(Variable v, const RationalFunction &value) const;
    RationalFunction substitute(const std::map<Variable, RationalFunction> &values) const;

    std::string str() const;

    friend bool operator==(const RationalFunction &a, const RationalFunction &b)
    {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

private:
    struct Canonical {};
    RationalFunction(Polynomial num, Polynomial den, Canonical) : num_(std::move(num)), den_(std::move(den)) {}
    static RationalFunction from_coprime(Polynomial num, Polynomial den);

    Polynomial num_;
    Polynomial den_;
};

enum class ArithOp { Add, Sub, Mul, Div };
RationalFunction poly_arith(const RationalFunction &a, const RationalFunction &b, ArithOp op);

RationalFunction partial_derivative(const RationalFunction &f, Variable v);

// Splits p into coefficients of distinct monomials in the variables whose kind
// is in `separate`; the map values carry the remaining variables.
std::map<Monomial, Polynomial> collect_by_monomials(const Polynomial &p, const std::set<VarKind> &separate);

// Multiplies each expression by its own denominator and strips the rational
// content, leaving primitive integer polynomials.
std::vector<Polynomial> clear_denominators(const std::vector<RationalFunction> &exprs);

BigRational eval_at_point(const RationalFunction &f, const Assignment &point);

std::string to_string(const BigRational &q);

} // namespace psym

template <>
struct std::hash<psym::Variable> {
    std::size_t operator()(psym::Variable v) const noexcept { return v.hash(); }
};

#endif
