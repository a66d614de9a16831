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

#include <psym/algebra.hpp>

#include <algorithm>
#include <cassert>
#include <deque>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <tuple>

namespace psym {

namespace detail {
struct VarRecord {
    VarKind kind;
    std::string name;
    std::uint32_t order;
};
} // namespace detail

namespace {

struct Registry {
    std::mutex mtx;
    std::deque<detail::VarRecord> storage;
    std::map<std::tuple<VarKind, std::string, std::uint32_t>, const detail::VarRecord *> index;
};

Registry &registry()
{
    static Registry r;
    return r;
}

std::uint32_t add_exp(std::uint32_t a, std::uint32_t b)
{
    if (a > std::numeric_limits<std::uint32_t>::max() - b) {
        throw ExponentOverflow();
    }
    return a + b;
}

} // namespace

const char *to_string(VarKind kind)
{
    switch (kind) {
    case VarKind::Time:
        return "time";
    case VarKind::State:
        return "state";
    case VarKind::Parameter:
        return "parameter";
    case VarKind::Input:
        return "input";
    case VarKind::OutputJet:
        return "output";
    case VarKind::AnsatzCoeff:
        return "ansatz";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Variable

Variable Variable::make(VarKind kind, std::string_view name, std::uint32_t order)
{
    if (order > 0 && kind != VarKind::OutputJet && kind != VarKind::Input) {
        throw InvalidArgument("jet order is only allowed for output and input variables");
    }
    auto &reg = registry();
    std::lock_guard<std::mutex> lock(reg.mtx);
    auto key = std::make_tuple(kind, std::string(name), order);
    auto it = reg.index.find(key);
    if (it != reg.index.end()) {
        return Variable(it->second);
    }
    reg.storage.push_back(detail::VarRecord{kind, std::string(name), order});
    const detail::VarRecord *rec = &reg.storage.back();
    reg.index.emplace(std::move(key), rec);
    return Variable(rec);
}

Variable Variable::time() { return make(VarKind::Time, "t"); }

VarKind Variable::kind() const { return rec_->kind; }
const std::string &Variable::name() const { return rec_->name; }
std::uint32_t Variable::order() const { return rec_->order; }

Variable Variable::with_order(std::uint32_t order) const { return make(kind(), name(), order); }

std::string Variable::display() const
{
    if (!rec_) {
        return "<invalid>";
    }
    return rec_->name + std::string(rec_->order, '\'');
}

std::strong_ordering operator<=>(Variable a, Variable b)
{
    if (a.rec_ == b.rec_) {
        return std::strong_ordering::equal;
    }
    if (!a.rec_ || !b.rec_) {
        return a.rec_ == nullptr ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (auto c = a.rec_->kind <=> b.rec_->kind; c != 0) {
        return c;
    }
    if (int c = a.rec_->name.compare(b.rec_->name); c != 0) {
        return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return a.rec_->order <=> b.rec_->order;
}

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::of(Variable v, std::uint32_t exp)
{
    Monomial m;
    if (exp > 0) {
        m.factors_.push_back({v, exp});
        m.degree_ = exp;
    }
    return m;
}

Monomial Monomial::from_powers(std::vector<VarPower> powers)
{
    std::sort(powers.begin(), powers.end(), [](const VarPower &a, const VarPower &b) { return a.var > b.var; });
    Monomial m;
    for (auto &p : powers) {
        if (p.exp == 0) {
            continue;
        }
        if (!m.factors_.empty() && m.factors_.back().var == p.var) {
            m.factors_.back().exp = add_exp(m.factors_.back().exp, p.exp);
        } else {
            m.factors_.push_back(p);
        }
        m.degree_ += p.exp;
    }
    return m;
}

std::uint32_t Monomial::degree_in(Variable v) const
{
    for (const auto &f : factors_) {
        if (f.var == v) {
            return f.exp;
        }
    }
    return 0;
}

Monomial Monomial::operator*(const Monomial &o) const
{
    Monomial r;
    r.factors_.reserve(factors_.size() + o.factors_.size());
    std::size_t i = 0, j = 0;
    while (i < factors_.size() && j < o.factors_.size()) {
        const auto &a = factors_[i];
        const auto &b = o.factors_[j];
        if (a.var == b.var) {
            r.factors_.push_back({a.var, add_exp(a.exp, b.exp)});
            ++i;
            ++j;
        } else if (a.var > b.var) {
            r.factors_.push_back(a);
            ++i;
        } else {
            r.factors_.push_back(b);
            ++j;
        }
    }
    for (; i < factors_.size(); ++i) {
        r.factors_.push_back(factors_[i]);
    }
    for (; j < o.factors_.size(); ++j) {
        r.factors_.push_back(o.factors_[j]);
    }
    r.degree_ = degree_ + o.degree_;
    return r;
}

bool Monomial::divides(const Monomial &o) const
{
    if (degree_ > o.degree_) {
        return false;
    }
    std::size_t j = 0;
    for (const auto &f : factors_) {
        while (j < o.factors_.size() && o.factors_[j].var > f.var) {
            ++j;
        }
        if (j == o.factors_.size() || o.factors_[j].var != f.var || o.factors_[j].exp < f.exp) {
            return false;
        }
        ++j;
    }
    return true;
}

Monomial Monomial::quotient_of(const Monomial &o) const
{
    if (!divides(o)) {
        throw NotExactDivision();
    }
    Monomial r;
    std::size_t i = 0;
    for (const auto &f : o.factors_) {
        std::uint32_t e = f.exp;
        if (i < factors_.size() && factors_[i].var == f.var) {
            e -= factors_[i].exp;
            ++i;
        }
        if (e > 0) {
            r.factors_.push_back({f.var, e});
            r.degree_ += e;
        }
    }
    return r;
}

Monomial Monomial::without(Variable v) const
{
    return filter([v](Variable w) { return w != v; });
}

Monomial Monomial::filter(const std::function<bool(Variable)> &pred) const
{
    Monomial r;
    for (const auto &f : factors_) {
        if (pred(f.var)) {
            r.factors_.push_back(f);
            r.degree_ += f.exp;
        }
    }
    return r;
}

Monomial Monomial::gcd(const Monomial &a, const Monomial &b)
{
    Monomial r;
    std::size_t j = 0;
    for (const auto &f : a.factors_) {
        while (j < b.factors_.size() && b.factors_[j].var > f.var) {
            ++j;
        }
        if (j < b.factors_.size() && b.factors_[j].var == f.var) {
            std::uint32_t e = std::min(f.exp, b.factors_[j].exp);
            r.factors_.push_back({f.var, e});
            r.degree_ += e;
        }
    }
    return r;
}

std::string Monomial::str() const
{
    if (factors_.empty()) {
        return "1";
    }
    std::string s;
    // Print in increasing variable order so that e.g. parameters precede jets.
    for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
        if (!s.empty()) {
            s += '*';
        }
        s += it->var.display();
        if (it->exp > 1) {
            s += '^' + std::to_string(it->exp);
        }
    }
    return s;
}

std::strong_ordering operator<=>(const Monomial &a, const Monomial &b)
{
    if (auto c = a.degree_ <=> b.degree_; c != 0) {
        return c;
    }
    std::size_t n = std::min(a.factors_.size(), b.factors_.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto &fa = a.factors_[i];
        const auto &fb = b.factors_[i];
        if (fa.var != fb.var) {
            return fa.var <=> fb.var;
        }
        if (fa.exp != fb.exp) {
            return fa.exp <=> fb.exp;
        }
    }
    return a.factors_.size() <=> b.factors_.size();
}

// ---------------------------------------------------------------------------
// Polynomial

namespace {

bool term_greater(const Term &a, const Term &b) { return a.mono > b.mono; }

BigRational rat_pow(const BigRational &base, std::uint32_t e)
{
    BigInt n, d;
    mpz_pow_ui(n.get_mpz_t(), base.get_num_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), base.get_den_mpz_t(), e);
    BigRational r(n, d);
    r.canonicalize();
    return r;
}

} // namespace

Polynomial::Polynomial(const BigRational &c)
{
    if (c != 0) {
        terms_.push_back({Monomial(), c});
    }
}

Polynomial::Polynomial(Variable v) { terms_.push_back({Monomial::of(v), BigRational(1)}); }

Polynomial::Polynomial(const BigRational &c, Monomial m)
{
    if (c != 0) {
        terms_.push_back({std::move(m), c});
    }
}

Polynomial Polynomial::from_terms(std::vector<Term> terms)
{
    std::sort(terms.begin(), terms.end(), term_greater);
    Polynomial p;
    p.terms_.reserve(terms.size());
    for (auto &t : terms) {
        if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
            p.terms_.back().coeff += t.coeff;
        } else {
            if (!p.terms_.empty() && p.terms_.back().coeff == 0) {
                p.terms_.pop_back();
            }
            p.terms_.push_back(std::move(t));
        }
    }
    if (!p.terms_.empty() && p.terms_.back().coeff == 0) {
        p.terms_.pop_back();
    }
    return p;
}

BigRational Polynomial::constant_value() const
{
    if (!is_constant()) {
        throw InvalidArgument("polynomial is not constant");
    }
    return terms_.empty() ? BigRational(0) : terms_[0].coeff;
}

BigRational Polynomial::coeff_of(const Monomial &m) const
{
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m, [](const Term &t, const Monomial &x) { return t.mono > x; });
    if (it != terms_.end() && it->mono == m) {
        return it->coeff;
    }
    return 0;
}

std::uint64_t Polynomial::total_degree() const { return terms_.empty() ? 0 : terms_.front().mono.total_degree(); }

std::uint32_t Polynomial::degree_in(Variable v) const
{
    std::uint32_t d = 0;
    for (const auto &t : terms_) {
        d = std::max(d, t.mono.degree_in(v));
    }
    return d;
}

std::set<Variable> Polynomial::variables() const
{
    std::set<Variable> vs;
    for (const auto &t : terms_) {
        for (const auto &f : t.mono.factors()) {
            vs.insert(f.var);
        }
    }
    return vs;
}

bool Polynomial::contains(Variable v) const
{
    for (const auto &t : terms_) {
        if (t.mono.degree_in(v) > 0) {
            return true;
        }
    }
    return false;
}

bool Polynomial::contains_kind(VarKind k) const
{
    for (const auto &t : terms_) {
        for (const auto &f : t.mono.factors()) {
            if (f.var.kind() == k) {
                return true;
            }
        }
    }
    return false;
}

Monomial Polynomial::monomial_content() const
{
    if (terms_.empty()) {
        return Monomial();
    }
    Monomial g = terms_[0].mono;
    for (std::size_t i = 1; i < terms_.size() && !g.is_one(); ++i) {
        g = Monomial::gcd(g, terms_[i].mono);
    }
    return g;
}

Polynomial Polynomial::operator-() const
{
    Polynomial r = *this;
    for (auto &t : r.terms_) {
        t.coeff = -t.coeff;
    }
    return r;
}

namespace {

std::vector<Term> merge_terms(const std::vector<Term> &a, const std::vector<Term> &b, bool subtract)
{
    std::vector<Term> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        auto c = a[i].mono <=> b[j].mono;
        if (c == 0) {
            BigRational s = subtract ? BigRational(a[i].coeff - b[j].coeff) : BigRational(a[i].coeff + b[j].coeff);
            if (s != 0) {
                out.push_back({a[i].mono, s});
            }
            ++i;
            ++j;
        } else if (c > 0) {
            out.push_back(a[i++]);
        } else {
            out.push_back(subtract ? Term{b[j].mono, -b[j].coeff} : b[j]);
            ++j;
        }
    }
    for (; i < a.size(); ++i) {
        out.push_back(a[i]);
    }
    for (; j < b.size(); ++j) {
        out.push_back(subtract ? Term{b[j].mono, -b[j].coeff} : b[j]);
    }
    return out;
}

} // namespace

Polynomial Polynomial::operator+(const Polynomial &o) const
{
    Polynomial r;
    r.terms_ = merge_terms(terms_, o.terms_, false);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial &o) const
{
    Polynomial r;
    r.terms_ = merge_terms(terms_, o.terms_, true);
    return r;
}

Polynomial Polynomial::operator*(const Polynomial &o) const
{
    if (is_zero() || o.is_zero()) {
        return Polynomial();
    }
    if (o.terms_.size() == 1) {
        return times_monomial(o.terms_[0].mono).scaled(o.terms_[0].coeff);
    }
    if (terms_.size() == 1) {
        return o.times_monomial(terms_[0].mono).scaled(terms_[0].coeff);
    }
    std::vector<Term> prod;
    prod.reserve(terms_.size() * o.terms_.size());
    for (const auto &a : terms_) {
        for (const auto &b : o.terms_) {
            prod.push_back({a.mono * b.mono, a.coeff * b.coeff});
        }
    }
    return from_terms(std::move(prod));
}

Polynomial Polynomial::scaled(const BigRational &c) const
{
    if (c == 0) {
        return Polynomial();
    }
    Polynomial r = *this;
    if (c != 1) {
        for (auto &t : r.terms_) {
            t.coeff *= c;
        }
    }
    return r;
}

Polynomial Polynomial::times_monomial(const Monomial &m) const
{
    if (m.is_one()) {
        return *this;
    }
    Polynomial r;
    r.terms_.reserve(terms_.size());
    // Multiplying by a monomial preserves the term order.
    for (const auto &t : terms_) {
        r.terms_.push_back({t.mono * m, t.coeff});
    }
    return r;
}

Polynomial Polynomial::divided_by_monomial(const Monomial &m) const
{
    if (m.is_one()) {
        return *this;
    }
    Polynomial r;
    r.terms_.reserve(terms_.size());
    for (const auto &t : terms_) {
        r.terms_.push_back({m.quotient_of(t.mono), t.coeff});
    }
    return r;
}

Polynomial Polynomial::pow(std::uint32_t e) const
{
    Polynomial result(1);
    Polynomial base = *this;
    if (terms_.size() == 1) {
        std::vector<VarPower> f = terms_[0].mono.factors();
        for (auto &vp : f) {
            std::uint64_t ne = std::uint64_t(vp.exp) * e;
            if (ne > std::numeric_limits<std::uint32_t>::max()) {
                throw ExponentOverflow();
            }
            vp.exp = std::uint32_t(ne);
        }
        return Polynomial(rat_pow(terms_[0].coeff, e), Monomial::from_powers(std::move(f)));
    }
    while (e > 0) {
        if (e & 1u) {
            result *= base;
        }
        e >>= 1u;
        if (e > 0) {
            base *= base;
        }
    }
    return result;
}

std::optional<Polynomial> Polynomial::try_divide(const Polynomial &b) const
{
    if (b.is_zero()) {
        throw DivisionByZero();
    }
    if (is_zero()) {
        return Polynomial();
    }
    if (b.terms_.size() == 1) {
        const auto &bt = b.terms_[0];
        Polynomial q;
        q.terms_.reserve(terms_.size());
        BigRational inv = 1 / bt.coeff;
        for (const auto &t : terms_) {
            if (!bt.mono.divides(t.mono)) {
                return std::nullopt;
            }
            q.terms_.push_back({bt.mono.quotient_of(t.mono), t.coeff * inv});
        }
        return q;
    }
    const Term &lb = b.terms_[0];
    if (!lb.mono.divides(terms_[0].mono) || total_degree() < b.total_degree()) {
        return std::nullopt;
    }
    BigRational inv = 1 / lb.coeff;
    std::vector<Term> quot;
    // Remainder keyed by monomial, largest first, so each step touches |b| terms.
    std::map<Monomial, BigRational, std::greater<>> r;
    for (const auto &t : terms_) {
        r.emplace_hint(r.end(), t.mono, t.coeff);
    }
    while (!r.empty()) {
        auto lead = r.begin();
        if (!lb.mono.divides(lead->first)) {
            return std::nullopt;
        }
        Term q{lb.mono.quotient_of(lead->first), lead->second * inv};
        r.erase(lead);
        for (std::size_t k = 1; k < b.terms_.size(); ++k) {
            Monomial m = b.terms_[k].mono * q.mono;
            BigRational c = b.terms_[k].coeff * q.coeff;
            auto [it, fresh] = r.try_emplace(std::move(m), -c);
            if (!fresh) {
                it->second -= c;
                if (it->second == 0) {
                    r.erase(it);
                }
            }
        }
        quot.push_back(std::move(q));
    }
    // Quotient terms are produced in decreasing order.
    Polynomial qp;
    qp.terms_ = std::move(quot);
    return qp;
}

Polynomial Polynomial::divide_exact(const Polynomial &b) const
{
    auto q = try_divide(b);
    if (!q) {
        throw NotExactDivision();
    }
    return *q;
}

Polynomial Polynomial::derivative(Variable v) const
{
    std::vector<Term> out;
    for (const auto &t : terms_) {
        std::uint32_t e = t.mono.degree_in(v);
        if (e == 0) {
            continue;
        }
        std::vector<VarPower> f = t.mono.factors();
        for (auto &vp : f) {
            if (vp.var == v) {
                vp.exp -= 1;
            }
        }
        out.push_back({Monomial::from_powers(std::move(f)), t.coeff * e});
    }
    return from_terms(std::move(out));
}

std::vector<Polynomial> Polynomial::coefficients_in(Variable v) const
{
    std::vector<std::vector<Term>> buckets(degree_in(v) + 1);
    for (const auto &t : terms_) {
        std::uint32_t e = t.mono.degree_in(v);
        buckets[e].push_back({e == 0 ? t.mono : t.mono.without(v), t.coeff});
    }
    std::vector<Polynomial> out;
    out.reserve(buckets.size());
    for (auto &b : buckets) {
        // Removing one variable from a grlex-sorted list does not keep it sorted.
        out.push_back(from_terms(std::move(b)));
    }
    return out;
}

Polynomial Polynomial::from_coefficients_in(Variable v, const std::vector<Polynomial> &coeffs)
{
    std::vector<Term> out;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        Monomial vk = Monomial::of(v, std::uint32_t(k));
        for (const auto &t : coeffs[k].terms_) {
            out.push_back({t.mono * vk, t.coeff});
        }
    }
    return from_terms(std::move(out));
}

BigRational Polynomial::content() const
{
    if (terms_.empty()) {
        return 0;
    }
    BigInt g = 0, l = 1;
    for (const auto &t : terms_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_num_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.get_den_mpz_t());
    }
    BigRational c(g, l);
    c.canonicalize();
    if (terms_[0].coeff < 0) {
        c = -c;
    }
    return c;
}

Polynomial Polynomial::primitive_part() const
{
    if (terms_.empty()) {
        return Polynomial();
    }
    BigRational c = content();
    if (c == 1) {
        return *this;
    }
    return scaled(1 / c);
}

BigRational Polynomial::evaluate(const Assignment &point) const
{
    BigRational sum = 0;
    for (const auto &t : terms_) {
        BigRational prod = t.coeff;
        for (const auto &f : t.mono.factors()) {
            auto it = point.find(f.var);
            if (it == point.end()) {
                throw MissingAssignment(f.var.display());
            }
            prod *= f.exp == 1 ? it->second : rat_pow(it->second, f.exp);
        }
        sum += prod;
    }
    return sum;
}

Polynomial Polynomial::substitute(Variable v, const Polynomial &value) const
{
    if (!contains(v)) {
        return *this;
    }
    auto coeffs = coefficients_in(v);
    Polynomial r = coeffs.back();
    for (std::size_t k = coeffs.size() - 1; k-- > 0;) {
        r = r * value + coeffs[k];
    }
    return r;
}

Polynomial Polynomial::substitute(const Assignment &partial) const
{
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto &t : terms_) {
        BigRational c = t.coeff;
        std::vector<VarPower> keep;
        for (const auto &f : t.mono.factors()) {
            auto it = partial.find(f.var);
            if (it == partial.end()) {
                keep.push_back(f);
            } else {
                c *= rat_pow(it->second, f.exp);
            }
        }
        out.push_back({Monomial::from_powers(std::move(keep)), c});
    }
    return from_terms(std::move(out));
}

std::string to_string(const BigRational &q) { return q.get_str(); }

std::string Polynomial::str() const
{
    if (terms_.empty()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (const auto &t : terms_) {
        BigRational c = t.coeff;
        if (first) {
            if (c < 0) {
                os << '-';
                c = -c;
            }
        } else {
            if (c < 0) {
                os << " - ";
                c = -c;
            } else {
                os << " + ";
            }
        }
        first = false;
        if (t.mono.is_one()) {
            os << c.get_str();
        } else if (c == 1) {
            os << t.mono.str();
        } else {
            os << c.get_str() << '*' << t.mono.str();
        }
    }
    return os.str();
}

bool operator==(const Polynomial &a, const Polynomial &b)
{
    if (a.terms_.size() != b.terms_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
        if (a.terms_[i].coeff != b.terms_[i].coeff || !(a.terms_[i].mono == b.terms_[i].mono)) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// GCD

namespace {

Polynomial gcd_nonzero(Polynomial a, Polynomial b);

// Content with respect to v: gcd of the coefficients of a viewed in K[others][v].
Polynomial content_in(const Polynomial &a, Variable v)
{
    auto coeffs = a.coefficients_in(v);
    Polynomial g;
    bool have = false;
    for (const auto &c : coeffs) {
        if (c.is_zero()) {
            continue;
        }
        if (!have) {
            g = c.primitive_part();
            have = true;
        } else {
            g = gcd_nonzero(g, c);
        }
        if (g.is_constant()) {
            return Polynomial(1);
        }
    }
    return g;
}

Polynomial leading_coeff_in(const Polynomial &a, Variable v) { return a.coefficients_in(v).back(); }

using Dense = std::vector<BigRational>;

void trim(Dense &p)
{
    while (!p.empty() && p.back() == 0) {
        p.pop_back();
    }
}

// Degree of the univariate gcd over Q; inputs have nonzero leading entries.
std::size_t dense_gcd_degree(Dense a, Dense b)
{
    if (a.size() < b.size()) {
        std::swap(a, b);
    }
    while (!b.empty()) {
        while (a.size() >= b.size() && !a.empty()) {
            BigRational f = a.back() / b.back();
            std::size_t shift = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i) {
                a[i + shift] -= f * b[i];
            }
            a.back() = 0;
            trim(a);
        }
        std::swap(a, b);
    }
    return a.size() - 1;
}

// Upper bound on deg_x gcd(a, b) from a univariate image at a random integer
// point that keeps both leading coefficients nonzero.
std::optional<std::size_t> gcd_degree_bound(const Polynomial &a, const Polynomial &b, Variable x,
                                            std::mt19937_64 &rng)
{
    std::set<Variable> others = a.variables();
    others.merge(b.variables());
    others.erase(x);
    std::uniform_int_distribution<long> pick(2, 1009);
    auto ca = a.coefficients_in(x);
    auto cb = b.coefficients_in(x);
    for (int attempt = 0; attempt < 4; ++attempt) {
        Assignment pt;
        for (Variable v : others) {
            pt[v] = BigRational(pick(rng));
        }
        Dense ua, ub;
        for (const auto &c : ca) {
            ua.push_back(c.evaluate(pt));
        }
        for (const auto &c : cb) {
            ub.push_back(c.evaluate(pt));
        }
        if (ua.back() == 0 || ub.back() == 0) {
            continue;
        }
        return dense_gcd_degree(std::move(ua), std::move(ub));
    }
    return std::nullopt;
}

Polynomial pseudo_remainder(const Polynomial &a, const Polynomial &b, Variable v)
{
    std::uint32_t db = b.degree_in(v);
    Polynomial lcb = leading_coeff_in(b, v);
    Polynomial r = a;
    std::uint32_t dr = r.degree_in(v);
    while (!r.is_zero() && dr >= db) {
        Polynomial lcr = leading_coeff_in(r, v);
        r = r * lcb - (lcr * b).times_monomial(Monomial::of(v, dr - db));
        r = r.primitive_part();
        dr = r.degree_in(v);
    }
    return r;
}

mpz_class integer_content(const Polynomial &a)
{
    mpz_class g = 0;
    for (const auto &t : a.terms()) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_num_mpz_t());
    }
    return g;
}

mpz_class max_norm(const Polynomial &a)
{
    mpz_class m = 0;
    for (const auto &t : a.terms()) {
        mpz_class v = abs(t.coeff.get_num());
        if (v > m) {
            m = v;
        }
    }
    return m;
}

// Inverse of evaluation at x = xi: reads h as a xi-adic expansion with
// symmetric digits.
Polynomial xi_adic_lift(Polynomial h, Variable x, const mpz_class &xi)
{
    mpz_class half = xi / 2;
    BigRational inv(mpz_class(1), xi);
    Polynomial out;
    for (std::uint32_t i = 0; !h.is_zero(); ++i) {
        std::vector<Term> digit;
        for (const auto &t : h.terms()) {
            mpz_class r;
            mpz_mod(r.get_mpz_t(), t.coeff.get_num_mpz_t(), xi.get_mpz_t());
            if (r > half) {
                r -= xi;
            }
            if (r != 0) {
                digit.push_back({t.mono, BigRational(r)});
            }
        }
        Polynomial d = Polynomial::from_terms(std::move(digit));
        out += d.times_monomial(Monomial::of(x, i));
        h = (h - d).scaled(inv);
    }
    return out;
}

// Heuristic gcd over Z[vars] by evaluation at large integers, each candidate
// confirmed by trial division. Returns the gcd including integer content, or
// nothing when the integers would grow past a fixed size.
std::optional<Polynomial> heuristic_gcd(const Polynomial &a, const Polynomial &b)
{
    mpz_class ca = integer_content(a), cb = integer_content(b), c;
    mpz_gcd(c.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
    if (a.is_constant() || b.is_constant()) {
        return Polynomial(BigRational(c));
    }
    Polynomial pa = a.scaled(BigRational(mpz_class(1), ca));
    Polynomial pb = b.scaled(BigRational(mpz_class(1), cb));
    std::set<Variable> vars = pa.variables();
    vars.merge(pb.variables());
    Variable x = *vars.rbegin();
    std::uint32_t deg = std::max(pa.degree_in(x), pb.degree_in(x));
    mpz_class xi = 2 * std::min(max_norm(pa), max_norm(pb)) + 29;
    for (int attempt = 0; attempt < 6; ++attempt) {
        if (mpz_sizeinbase(xi.get_mpz_t(), 2) * (deg + 1) > (1u << 20)) {
            return std::nullopt;
        }
        Polynomial ea = pa.substitute(x, Polynomial(BigRational(xi)));
        Polynomial eb = pb.substitute(x, Polynomial(BigRational(xi)));
        if (!ea.is_zero() && !eb.is_zero()) {
            auto h = heuristic_gcd(ea, eb);
            if (!h) {
                return std::nullopt;
            }
            Polynomial g = xi_adic_lift(*h, x, xi);
            if (!g.is_zero()) {
                g = g.primitive_part();
                if (pa.try_divide(g) && pb.try_divide(g)) {
                    return g.scaled(BigRational(c));
                }
            }
        }
        xi = xi * 73794 / 27011;
    }
    return std::nullopt;
}

Polynomial gcd_nonzero(Polynomial a, Polynomial b)
{
    a = a.primitive_part();
    b = b.primitive_part();
    if (a.is_constant() || b.is_constant()) {
        return Polynomial(1);
    }
    Monomial gm = Monomial::gcd(a.monomial_content(), b.monomial_content());
    a = a.divided_by_monomial(a.monomial_content());
    b = b.divided_by_monomial(b.monomial_content());
    Polynomial mono_part(BigRational(1), gm);
    if (a.is_constant() || b.is_constant()) {
        return mono_part;
    }
    if (a == b) {
        return a * mono_part;
    }
    if (a.term_count() <= b.term_count()) {
        if (b.try_divide(a)) {
            return a * mono_part;
        }
    } else if (a.try_divide(b)) {
        return b * mono_part;
    }

    // A variable present in only one operand, or one whose univariate image
    // gcd is trivial, cannot occur in the gcd and is eliminated via contents.
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    for (;;) {
        auto va = a.variables();
        auto vb = b.variables();
        bool changed = false;
        for (Variable v : va) {
            if (!vb.count(v)) {
                a = content_in(a, v);
                changed = true;
                break;
            }
        }
        if (!changed) {
            for (Variable v : vb) {
                if (!va.count(v)) {
                    b = content_in(b, v);
                    changed = true;
                    break;
                }
            }
        }
        if (a.is_constant() || b.is_constant()) {
            return mono_part;
        }
        if (!changed) {
            for (Variable v : va) {
                auto bound = gcd_degree_bound(a, b, v, rng);
                if (bound && *bound == 0) {
                    a = content_in(a, v);
                    b = content_in(b, v);
                    changed = true;
                    break;
                }
            }
            if (a.is_constant() || b.is_constant()) {
                return mono_part;
            }
        }
        if (!changed) {
            break;
        }
    }

    if (auto h = heuristic_gcd(a, b)) {
        return (*h * mono_part).primitive_part();
    }

    auto vars = a.variables();
    Variable x;
    std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
    for (Variable v : vars) {
        std::uint32_t d = std::max(a.degree_in(v), b.degree_in(v));
        if (d < best) {
            best = d;
            x = v;
        }
    }

    Polynomial ca = content_in(a, x);
    Polynomial cb = content_in(b, x);
    Polynomial c = (ca.is_constant() || cb.is_constant()) ? Polynomial(1) : gcd_nonzero(ca, cb);
    Polynomial pa = a.divide_exact(ca);
    Polynomial pb = b.divide_exact(cb);
    if (pa.degree_in(x) < pb.degree_in(x)) {
        std::swap(pa, pb);
    }
    Polynomial g;
    for (;;) {
        Polynomial r = pseudo_remainder(pa, pb, x);
        if (r.is_zero()) {
            g = pb;
            break;
        }
        if (!r.contains(x)) {
            g = Polynomial(1);
            break;
        }
        pa = std::move(pb);
        pb = r.divide_exact(content_in(r, x));
    }
    if (!g.is_constant()) {
        g = g.divide_exact(content_in(g, x));
    }
    return (c * g * mono_part).primitive_part();
}

} // namespace

Polynomial gcd(const Polynomial &a, const Polynomial &b)
{
    if (a.is_zero()) {
        return b.primitive_part();
    }
    if (b.is_zero()) {
        return a.primitive_part();
    }
    return gcd_nonzero(a, b);
}

Polynomial lcm(const Polynomial &a, const Polynomial &b)
{
    if (a.is_zero() || b.is_zero()) {
        return Polynomial();
    }
    Polynomial g = gcd(a, b);
    return (a.divide_exact(g) * b).primitive_part();
}

// ---------------------------------------------------------------------------
// RationalFunction

RationalFunction RationalFunction::from_coprime(Polynomial num, Polynomial den)
{
    if (num.is_zero()) {
        return RationalFunction();
    }
    BigRational c = den.content();
    if (c != 1) {
        BigRational inv = 1 / c;
        num = num.scaled(inv);
        den = den.scaled(inv);
    }
    return RationalFunction(std::move(num), std::move(den), Canonical{});
}

RationalFunction::RationalFunction(const Polynomial &num, const Polynomial &den)
{
    if (den.is_zero()) {
        throw DivisionByZero();
    }
    if (num.is_zero()) {
        den_ = Polynomial(1);
        return;
    }
    Polynomial n = num, d = den;
    if (!d.is_constant()) {
        Polynomial g = gcd(n, d);
        if (!g.is_constant()) {
            n = n.divide_exact(g);
            d = d.divide_exact(g);
        }
    }
    *this = from_coprime(std::move(n), std::move(d));
}

BigRational RationalFunction::constant_value() const
{
    if (!is_constant()) {
        throw InvalidArgument("rational function is not constant");
    }
    return num_.constant_value() / den_.constant_value();
}

std::set<Variable> RationalFunction::variables() const
{
    auto v = num_.variables();
    auto w = den_.variables();
    v.insert(w.begin(), w.end());
    return v;
}

RationalFunction RationalFunction::operator-() const { return RationalFunction(-num_, den_, Canonical{}); }

RationalFunction RationalFunction::operator+(const RationalFunction &o) const
{
    if (is_zero()) {
        return o;
    }
    if (o.is_zero()) {
        return *this;
    }
    if (is_polynomial() && o.is_polynomial()) {
        return RationalFunction(num_ + o.num_);
    }
    if (den_ == o.den_) {
        return RationalFunction(num_ + o.num_, den_);
    }
    Polynomial g = gcd(den_, o.den_);
    if (g.is_constant()) {
        return from_coprime(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    Polynomial d1 = den_.divide_exact(g);
    Polynomial d2 = o.den_.divide_exact(g);
    Polynomial n = num_ * d2 + o.num_ * d1;
    if (n.is_zero()) {
        return RationalFunction();
    }
    Polynomial g2 = gcd(n, g);
    if (!g2.is_constant()) {
        n = n.divide_exact(g2);
        g = g.divide_exact(g2);
    }
    return from_coprime(std::move(n), d1 * d2 * g);
}

RationalFunction RationalFunction::operator-(const RationalFunction &o) const { return *this + (-o); }

RationalFunction RationalFunction::operator*(const RationalFunction &o) const
{
    if (is_zero() || o.is_zero()) {
        return RationalFunction();
    }
    if (is_polynomial() && o.is_polynomial()) {
        return RationalFunction(num_ * o.num_);
    }
    Polynomial a = num_, b = den_, c = o.num_, d = o.den_;
    Polynomial g1 = d.is_constant() ? Polynomial(1) : gcd(a, d);
    Polynomial g2 = b.is_constant() ? Polynomial(1) : gcd(c, b);
    if (!g1.is_constant()) {
        a = a.divide_exact(g1);
        d = d.divide_exact(g1);
    }
    if (!g2.is_constant()) {
        c = c.divide_exact(g2);
        b = b.divide_exact(g2);
    }
    return from_coprime(a * c, b * d);
}

RationalFunction RationalFunction::reciprocal() const
{
    if (is_zero()) {
        throw DivisionByZero();
    }
    return from_coprime(den_, num_);
}

RationalFunction RationalFunction::operator/(const RationalFunction &o) const { return *this * o.reciprocal(); }

RationalFunction RationalFunction::pow(std::int64_t e) const
{
    if (e < 0) {
        return reciprocal().pow(-e);
    }
    if (e > std::numeric_limits<std::uint32_t>::max()) {
        throw ExponentOverflow();
    }
    // Powers of coprime polynomials stay coprime.
    return from_coprime(num_.pow(std::uint32_t(e)), den_.pow(std::uint32_t(e)));
}

RationalFunction RationalFunction::derivative(Variable v) const
{
    if (!den_.contains(v)) {
        return from_coprime(num_.derivative(v), den_);
    }
    Polynomial n = num_.derivative(v) * den_ - num_ * den_.derivative(v);
    return RationalFunction(n, den_ * den_);
}

BigRational RationalFunction::evaluate(const Assignment &point) const
{
    BigRational d = den_.evaluate(point);
    if (d == 0) {
        throw PoleAtPoint();
    }
    return num_.evaluate(point) / d;
}

RationalFunction RationalFunction::substitute(Variable v, const RationalFunction &value) const
{
    return substitute(std::map<Variable, RationalFunction>{{v, value}});
}

RationalFunction RationalFunction::substitute(const std::map<Variable, RationalFunction> &values) const
{
    // Homogenize: with v = p/q and n = max degree of v, multiply numerator and
    // denominator by q^n so everything stays polynomial.
    std::map<Variable, std::uint32_t> maxdeg;
    for (const auto &[v, val] : values) {
        std::uint32_t d = std::max(num_.degree_in(v), den_.degree_in(v));
        if (d > 0) {
            maxdeg[v] = d;
        }
    }
    if (maxdeg.empty()) {
        return *this;
    }
    std::map<std::pair<Variable, std::uint32_t>, Polynomial> pcache, qcache;
    auto power = [&](std::map<std::pair<Variable, std::uint32_t>, Polynomial> &cache, Variable v, const Polynomial &base,
                     std::uint32_t e) -> const Polynomial & {
        auto key = std::make_pair(v, e);
        auto it = cache.find(key);
        if (it == cache.end()) {
            it = cache.emplace(key, base.pow(e)).first;
        }
        return it->second;
    };
    auto homog = [&](const Polynomial &p) {
        Polynomial acc;
        for (const auto &t : p.terms()) {
            std::vector<VarPower> keep;
            Polynomial prod(t.coeff);
            std::map<Variable, std::uint32_t> seen;
            for (const auto &f : t.mono.factors()) {
                auto it = values.find(f.var);
                if (it == values.end()) {
                    keep.push_back(f);
                } else {
                    seen[f.var] = f.exp;
                }
            }
            for (const auto &[v, n] : maxdeg) {
                std::uint32_t e = seen.count(v) ? seen[v] : 0;
                const RationalFunction &val = values.at(v);
                if (e > 0) {
                    prod *= power(pcache, v, val.numerator(), e);
                }
                if (n > e && !val.denominator().is_constant()) {
                    prod *= power(qcache, v, val.denominator(), n - e);
                }
            }
            acc += prod.times_monomial(Monomial::from_powers(std::move(keep)));
        }
        return acc;
    };
    return RationalFunction(homog(num_), homog(den_));
}

std::string RationalFunction::str() const
{
    if (is_polynomial()) {
        return num_.str();
    }
    std::string n = num_.str();
    if (num_.term_count() > 1) {
        n = "(" + n + ")";
    }
    std::string d = den_.str();
    bool simple_den = den_.term_count() == 1 && den_.leading_coeff() == 1 && den_.leading_term().mono.factors().size() == 1;
    if (!simple_den) {
        d = "(" + d + ")";
    }
    return n + "/" + d;
}

// ---------------------------------------------------------------------------
// Free functions

RationalFunction poly_arith(const RationalFunction &a, const RationalFunction &b, ArithOp op)
{
    switch (op) {
    case ArithOp::Add:
        return a + b;
    case ArithOp::Sub:
        return a - b;
    case ArithOp::Mul:
        return a * b;
    case ArithOp::Div:
        if (b.is_zero()) {
            throw DivisionByZero();
        }
        return a / b;
    }
    throw InvalidArgument("unknown arithmetic operation");
}

RationalFunction partial_derivative(const RationalFunction &f, Variable v) { return f.derivative(v); }

std::map<Monomial, Polynomial> collect_by_monomials(const Polynomial &p, const std::set<VarKind> &separate)
{
    std::map<Monomial, std::vector<Term>> buckets;
    auto in_sep = [&](Variable v) { return separate.count(v.kind()) > 0; };
    auto in_rest = [&](Variable v) { return separate.count(v.kind()) == 0; };
    for (const auto &t : p.terms()) {
        buckets[t.mono.filter(in_sep)].push_back({t.mono.filter(in_rest), t.coeff});
    }
    std::map<Monomial, Polynomial> out;
    for (auto &[k, terms] : buckets) {
        out.emplace(k, Polynomial::from_terms(std::move(terms)));
    }
    return out;
}

std::vector<Polynomial> clear_denominators(const std::vector<RationalFunction> &exprs)
{
    std::vector<Polynomial> out;
    out.reserve(exprs.size());
    for (const auto &e : exprs) {
        out.push_back(e.numerator().primitive_part());
    }
    return out;
}

BigRational eval_at_point(const RationalFunction &f, const Assignment &point) { return f.evaluate(point); }

} // namespace psym
