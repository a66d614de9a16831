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

#include <psym/model.hpp>

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace psym {

std::string ParseDiagnostic::str() const
{
    std::ostringstream os;
    if (line > 0) {
        os << line << ':' << column << ": ";
    }
    os << (severity == Severity::Error ? "error: " : "warning: ") << message;
    return os.str();
}

std::string format_diagnostics(const std::vector<ParseDiagnostic> &diags)
{
    std::string out;
    for (const auto &d : diags) {
        if (!out.empty()) {
            out += '\n';
        }
        out += d.str();
    }
    return out;
}

std::optional<std::size_t> ModelSpec::state_index(Variable v) const
{
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i] == v) {
            return i;
        }
    }
    return std::nullopt;
}

std::optional<std::size_t> ModelSpec::parameter_index(Variable v) const
{
    for (std::size_t i = 0; i < parameters.size(); ++i) {
        if (parameters[i] == v) {
            return i;
        }
    }
    return std::nullopt;
}

std::optional<std::size_t> ModelSpec::output_index(const std::string &n) const
{
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        if (outputs[i].name == n) {
            return i;
        }
    }
    return std::nullopt;
}

std::optional<Variable> ModelSpec::find_parameter(const std::string &n) const
{
    for (auto p : parameters) {
        if (p.name() == n) {
            return p;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Expressions

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

struct ExprFail {
    std::size_t pos;
    std::string message;
};

class ExprParser {
public:
    ExprParser(std::string_view text, const SymbolResolver &resolve) : s_(text), resolve_(resolve) {}

    RationalFunction parse()
    {
        skip_ws();
        if (pos_ >= s_.size()) {
            throw ExprFail{pos_, "expected an expression"};
        }
        RationalFunction r = expr();
        skip_ws();
        if (pos_ < s_.size()) {
            throw ExprFail{pos_, std::string("unexpected '") + s_[pos_] + "'"};
        }
        return r;
    }

private:
    void skip_ws()
    {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    RationalFunction expr()
    {
        RationalFunction acc = term();
        for (;;) {
            if (accept('+')) {
                acc += term();
            } else if (accept('-')) {
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    RationalFunction term()
    {
        RationalFunction acc = unary();
        for (;;) {
            skip_ws();
            std::size_t at = pos_;
            if (accept('*')) {
                acc *= unary();
            } else if (accept('/')) {
                RationalFunction d = unary();
                if (d.is_zero()) {
                    throw ExprFail{at, "division by zero"};
                }
                acc /= d;
            } else {
                return acc;
            }
        }
    }

    RationalFunction unary()
    {
        if (accept('-')) {
            return -unary();
        }
        if (accept('+')) {
            return unary();
        }
        return power();
    }

    RationalFunction power()
    {
        RationalFunction base = primary();
        skip_ws();
        std::size_t at = pos_;
        if (!accept('^')) {
            return base;
        }
        std::int64_t e = exponent();
        if (e < 0 && base.is_zero()) {
            throw ExprFail{at, "division by zero"};
        }
        return base.pow(e);
    }

    std::int64_t exponent()
    {
        bool paren = accept('(');
        bool neg = false;
        if (accept('-')) {
            neg = true;
        } else {
            accept('+');
        }
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && is_digit(s_[pos_])) {
            ++pos_;
        }
        if (start == pos_ ||
            (pos_ < s_.size() && (s_[pos_] == '.' || is_ident_start(s_[pos_]) || s_[pos_] == '\''))) {
            throw ExprFail{start, "exponent must be an integer literal"};
        }
        std::string digits(s_.substr(start, pos_ - start));
        if (digits.size() > 9) {
            throw ExprFail{start, "exponent too large"};
        }
        std::int64_t e = std::stoll(digits);
        if (paren && !accept(')')) {
            skip_ws();
            throw ExprFail{pos_, "exponent must be an integer literal"};
        }
        return neg ? -e : e;
    }

    RationalFunction number()
    {
        std::size_t start = pos_;
        BigInt mant = 0;
        int frac_digits = 0;
        while (pos_ < s_.size() && is_digit(s_[pos_])) {
            mant = mant * 10 + (s_[pos_] - '0');
            ++pos_;
        }
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && is_digit(s_[pos_])) {
                mant = mant * 10 + (s_[pos_] - '0');
                ++frac_digits;
                ++pos_;
            }
        }
        long exp10 = -frac_digits;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            bool neg = false;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
                neg = s_[pos_] == '-';
                ++pos_;
            }
            if (pos_ < s_.size() && is_digit(s_[pos_])) {
                long e = 0;
                while (pos_ < s_.size() && is_digit(s_[pos_])) {
                    e = e * 10 + (s_[pos_] - '0');
                    if (e > 100000) {
                        throw ExprFail{start, "numeric exponent too large"};
                    }
                    ++pos_;
                }
                exp10 += neg ? -e : e;
            } else {
                pos_ = save;
            }
        }
        if (pos_ < s_.size() && is_ident_char(s_[pos_])) {
            throw ExprFail{pos_, "malformed number"};
        }
        BigInt scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
        BigRational q = exp10 < 0 ? BigRational(mant, scale) : BigRational(mant * scale);
        q.canonicalize();
        return RationalFunction(q);
    }

    RationalFunction primary()
    {
        skip_ws();
        if (pos_ >= s_.size()) {
            throw ExprFail{pos_, "unexpected end of expression"};
        }
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            RationalFunction r = expr();
            if (!accept(')')) {
                skip_ws();
                throw ExprFail{pos_, "expected ')'"};
            }
            return r;
        }
        if (is_digit(c) || (c == '.' && pos_ + 1 < s_.size() && is_digit(s_[pos_ + 1]))) {
            return number();
        }
        if (is_ident_start(c)) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && is_ident_char(s_[pos_])) {
                ++pos_;
            }
            std::string name(s_.substr(start, pos_ - start));
            unsigned primes = 0;
            while (pos_ < s_.size() && s_[pos_] == '\'') {
                ++primes;
                ++pos_;
            }
            auto v = resolve_(name, primes);
            if (!v) {
                std::string shown = name + std::string(primes, '\'');
                throw ExprFail{start, "undeclared identifier '" + shown + "'"};
            }
            return RationalFunction(*v);
        }
        throw ExprFail{pos_, std::string("unexpected '") + c + "'"};
    }

    std::string_view s_;
    const SymbolResolver &resolve_;
    std::size_t pos_ = 0;
};

} // namespace

std::optional<RationalFunction> try_parse_expression(std::string_view text, const SymbolResolver &resolve,
                                                     ExpressionError &err)
{
    try {
        return ExprParser(text, resolve).parse();
    } catch (const ExprFail &f) {
        err = ExpressionError{int(f.pos) + 1, f.message};
    } catch (const DivisionByZero &) {
        err = ExpressionError{1, "division by zero"};
    } catch (const ExponentOverflow &) {
        err = ExpressionError{1, "exponent overflow"};
    }
    return std::nullopt;
}

RationalFunction parse_expression(std::string_view text, const SymbolResolver &resolve)
{
    ExpressionError err;
    auto r = try_parse_expression(text, resolve, err);
    if (!r) {
        throw ParseError(std::to_string(err.column) + ": " + err.message);
    }
    return *r;
}

SymbolResolver model_resolver(const ModelSpec &spec)
{
    std::map<std::string, Variable> names;
    for (auto v : spec.states) {
        names.emplace(v.name(), v);
    }
    for (auto v : spec.parameters) {
        names.emplace(v.name(), v);
    }
    for (auto v : spec.inputs) {
        names.emplace(v.name(), v);
    }
    return [names](const std::string &n, unsigned primes) -> std::optional<Variable> {
        if (primes > 0) {
            return std::nullopt;
        }
        if (n == "t") {
            return Variable::time();
        }
        auto it = names.find(n);
        if (it == names.end()) {
            return std::nullopt;
        }
        return it->second;
    };
}

SymbolResolver parameter_resolver(const ModelSpec &spec)
{
    std::map<std::string, Variable> names;
    for (auto v : spec.parameters) {
        names.emplace(v.name(), v);
    }
    return [names](const std::string &n, unsigned primes) -> std::optional<Variable> {
        if (primes > 0) {
            return std::nullopt;
        }
        auto it = names.find(n);
        if (it == names.end()) {
            return std::nullopt;
        }
        return it->second;
    };
}

// ---------------------------------------------------------------------------
// Model files

namespace {

struct Line {
    int number;
    std::string text; // comment and trailing whitespace removed
    std::size_t indent;
};

std::vector<Line> split_lines(std::string_view src)
{
    std::vector<Line> out;
    int n = 0;
    std::size_t i = 0;
    while (i <= src.size()) {
        std::size_t j = src.find('\n', i);
        if (j == std::string_view::npos) {
            j = src.size();
        }
        std::string raw(src.substr(i, j - i));
        ++n;
        if (!raw.empty() && raw.back() == '\r') {
            raw.pop_back();
        }
        if (auto h = raw.find('#'); h != std::string::npos) {
            raw.erase(h);
        }
        while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back()))) {
            raw.pop_back();
        }
        std::size_t ind = 0;
        while (ind < raw.size() && std::isspace(static_cast<unsigned char>(raw[ind]))) {
            ++ind;
        }
        out.push_back({n, raw, ind});
        if (j == src.size()) {
            break;
        }
        i = j + 1;
    }
    return out;
}

bool valid_identifier(const std::string &s)
{
    if (s.empty() || !is_ident_start(s[0])) {
        return false;
    }
    for (char c : s) {
        if (!is_ident_char(c)) {
            return false;
        }
    }
    return true;
}

std::string trim(const std::string &s)
{
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) {
        ++a;
    }
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) {
        --b;
    }
    return s.substr(a, b - a);
}

// Splits "keyword rest"; returns the keyword and the column where rest starts.
std::pair<std::string, std::size_t> keyword(const Line &l)
{
    std::size_t i = l.indent;
    while (i < l.text.size() && is_ident_char(l.text[i])) {
        ++i;
    }
    std::string kw = l.text.substr(l.indent, i - l.indent);
    if (i < l.text.size() && !std::isspace(static_cast<unsigned char>(l.text[i]))) {
        return {"", l.indent};
    }
    while (i < l.text.size() && std::isspace(static_cast<unsigned char>(l.text[i]))) {
        ++i;
    }
    return {kw, i};
}

class ModelParser {
public:
    explicit ModelParser(std::string_view src) : lines_(split_lines(src)) {}

    ParseResult run()
    {
        enum class Section { Header, Odes, Outputs, Done } sec = Section::Header;
        int last_line = 1;
        int odes_line = 0;
        bool saw_end = false;
        for (const auto &l : lines_) {
            last_line = l.number;
            if (l.indent >= l.text.size()) {
                continue;
            }
            auto [kw, rest] = keyword(l);
            if (sec == Section::Done) {
                error(l.number, int(l.indent) + 1, "unexpected content after 'end'");
                continue;
            }
            if (kw == "end" && rest >= l.text.size()) {
                if (sec != Section::Outputs) {
                    error(l.number, int(l.indent) + 1, "'end' before an 'outputs' block");
                }
                sec = Section::Done;
                saw_end = true;
                continue;
            }
            if (sec == Section::Header) {
                if (kw == "odes" && rest >= l.text.size()) {
                    sec = Section::Odes;
                    odes_line = l.number;
                } else if (kw == "model") {
                    model_line(l, rest);
                } else if (kw == "states") {
                    declare(l, rest, VarKind::State);
                } else if (kw == "params" || kw == "parameters") {
                    declare(l, rest, VarKind::Parameter);
                } else if (kw == "inputs") {
                    declare(l, rest, VarKind::Input);
                } else {
                    error(l.number, int(l.indent) + 1,
                          "expected 'model', 'states', 'params', 'inputs' or 'odes'");
                }
                continue;
            }
            if (sec == Section::Odes) {
                if (kw == "outputs" && rest >= l.text.size()) {
                    sec = Section::Outputs;
                    continue;
                }
                ode_line(l);
                continue;
            }
            output_line(l);
        }
        if (sec == Section::Header) {
            error(last_line, 1, "missing 'odes' block");
        } else if (sec == Section::Odes) {
            error(last_line, 1, "missing 'outputs' block");
        }
        if (!saw_end && sec != Section::Header && sec != Section::Odes) {
            error(last_line, 1, "missing 'end'");
        }
        for (std::size_t i = 0; i < spec_.states.size(); ++i) {
            if (!have_rhs_[i]) {
                error(odes_line, 1, "no equation for state '" + spec_.states[i].name() + "'");
            }
        }

        ParseResult res;
        if (has_error_) {
            res.diagnostics = std::move(diags_);
            return res;
        }
        spec_.rhs = std::move(rhs_);
        for (const auto &d : validate(spec_)) {
            if (d.is_error()) {
                has_error_ = true;
            }
            diags_.push_back(d);
        }
        res.diagnostics = std::move(diags_);
        if (!has_error_) {
            res.model = std::move(spec_);
        }
        return res;
    }

private:
    void error(int line, int col, std::string msg)
    {
        diags_.push_back({ParseDiagnostic::Severity::Error, line, col, std::move(msg)});
        has_error_ = true;
    }

    void model_line(const Line &l, std::size_t rest)
    {
        std::string name = l.text.substr(rest);
        if (!valid_identifier(name)) {
            error(l.number, int(rest) + 1, "expected a model name");
            return;
        }
        if (have_name_) {
            error(l.number, int(l.indent) + 1, "duplicate 'model' line");
        }
        have_name_ = true;
        spec_.name = name;
    }

    void declare(const Line &l, std::size_t rest, VarKind kind)
    {
        std::size_t i = rest;
        const std::string &t = l.text;
        if (i >= t.size()) {
            error(l.number, int(i) + 1, "expected at least one identifier");
            return;
        }
        while (i <= t.size()) {
            std::size_t j = t.find(',', i);
            if (j == std::string::npos) {
                j = t.size();
            }
            std::string raw = t.substr(i, j - i);
            std::size_t lead = 0;
            while (lead < raw.size() && std::isspace(static_cast<unsigned char>(raw[lead]))) {
                ++lead;
            }
            std::string name = trim(raw);
            int col = int(i + lead) + 1;
            if (!valid_identifier(name)) {
                error(l.number, col, "invalid identifier '" + name + "'");
            } else if (name == "t") {
                error(l.number, col, "'t' is reserved for time");
            } else if (names_.count(name)) {
                error(l.number, col, "duplicate declaration of '" + name + "'");
            } else {
                names_.insert(name);
                Variable v = Variable::make(kind, name);
                if (kind == VarKind::State) {
                    spec_.states.push_back(v);
                    rhs_.emplace_back();
                    have_rhs_.push_back(false);
                } else if (kind == VarKind::Parameter) {
                    spec_.parameters.push_back(v);
                } else {
                    spec_.inputs.push_back(v);
                }
            }
            if (j == t.size()) {
                break;
            }
            i = j + 1;
        }
    }

    // Returns the expression after '=' with its 0-based column, or nullopt.
    std::optional<std::size_t> split_eq(const Line &l, std::size_t lhs_end)
    {
        std::size_t i = lhs_end;
        while (i < l.text.size() && std::isspace(static_cast<unsigned char>(l.text[i]))) {
            ++i;
        }
        if (i >= l.text.size() || l.text[i] != '=') {
            error(l.number, int(i) + 1, "expected '='");
            return std::nullopt;
        }
        return i + 1;
    }

    std::optional<RationalFunction> expr_at(const Line &l, std::size_t from)
    {
        ExpressionError err;
        auto r = try_parse_expression(std::string_view(l.text).substr(from), model_resolver(spec_), err);
        if (!r) {
            error(l.number, int(from) + err.column, err.message);
        }
        return r;
    }

    void ode_line(const Line &l)
    {
        odes_started_ = true;
        std::size_t i = l.indent;
        while (i < l.text.size() && is_ident_char(l.text[i])) {
            ++i;
        }
        std::string name = l.text.substr(l.indent, i - l.indent);
        if (!valid_identifier(name) || i >= l.text.size() || l.text[i] != '\'') {
            error(l.number, int(l.indent) + 1, "expected \"<state>' = <expression>\"");
            return;
        }
        auto eq = split_eq(l, i + 1);
        if (!eq) {
            return;
        }
        std::optional<std::size_t> idx;
        for (std::size_t k = 0; k < spec_.states.size(); ++k) {
            if (spec_.states[k].name() == name) {
                idx = k;
            }
        }
        if (!idx) {
            error(l.number, int(l.indent) + 1, "'" + name + "' is not a declared state");
            return;
        }
        if (have_rhs_[*idx]) {
            error(l.number, int(l.indent) + 1, "duplicate equation for state '" + name + "'");
            return;
        }
        auto r = expr_at(l, *eq);
        have_rhs_[*idx] = true;
        if (r) {
            rhs_[*idx] = *r;
        }
    }

    void output_line(const Line &l)
    {
        std::size_t i = l.indent;
        while (i < l.text.size() && is_ident_char(l.text[i])) {
            ++i;
        }
        std::string name = l.text.substr(l.indent, i - l.indent);
        if (!valid_identifier(name)) {
            error(l.number, int(l.indent) + 1, "expected \"<output> = <expression>\"");
            return;
        }
        auto eq = split_eq(l, i);
        if (!eq) {
            return;
        }
        if (name == "t" || names_.count(name)) {
            error(l.number, int(l.indent) + 1, "output name '" + name + "' is already declared");
            return;
        }
        names_.insert(name);
        auto r = expr_at(l, *eq);
        if (r) {
            spec_.outputs.push_back({name, *r});
        }
    }

    std::vector<Line> lines_;
    ModelSpec spec_;
    std::vector<RationalFunction> rhs_;
    std::vector<bool> have_rhs_;
    std::set<std::string> names_;
    std::vector<ParseDiagnostic> diags_;
    bool has_error_ = false;
    bool have_name_ = false;
    bool odes_started_ = false;
};

} // namespace

ParseResult parse_model(std::string_view source)
{
    ParseResult r = ModelParser(source).run();
    if (r.model && r.model->name.empty()) {
        r.model->name = "model";
    }
    return r;
}

ModelSpec load_model(std::string_view source)
{
    ParseResult r = parse_model(source);
    if (!r.model) {
        throw ParseError(format_diagnostics(r.diagnostics));
    }
    return *r.model;
}

ModelSpec load_model_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidArgument("cannot open model file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_model(ss.str());
}

std::vector<ParseDiagnostic> validate(const ModelSpec &spec)
{
    using Sev = ParseDiagnostic::Severity;
    std::vector<ParseDiagnostic> out;
    auto err = [&](std::string m) { out.push_back({Sev::Error, 0, 0, std::move(m)}); };

    std::set<std::string> names;
    auto unique = [&](Variable v) {
        if (!names.insert(v.name()).second) {
            err("name '" + v.name() + "' is declared more than once");
        }
    };
    for (auto v : spec.states) {
        unique(v);
    }
    for (auto v : spec.parameters) {
        unique(v);
    }
    for (auto v : spec.inputs) {
        unique(v);
    }
    for (const auto &o : spec.outputs) {
        if (!names.insert(o.name).second) {
            err("output name '" + o.name + "' collides with another name");
        }
    }

    if (spec.states.empty()) {
        err("the model declares no states");
    }
    if (spec.rhs.size() != spec.states.size()) {
        err("expected one equation per state");
    }
    if (spec.outputs.empty()) {
        err("the model declares no outputs");
    }
    if (spec.outputs.size() > spec.states.size()) {
        err("more outputs than states");
    }

    std::set<Variable> declared(spec.states.begin(), spec.states.end());
    declared.insert(spec.parameters.begin(), spec.parameters.end());
    declared.insert(spec.inputs.begin(), spec.inputs.end());
    declared.insert(Variable::time());
    std::set<Variable> used;
    auto check = [&](const RationalFunction &f, const std::string &where) {
        for (auto v : f.variables()) {
            used.insert(v);
            if (!declared.count(v)) {
                err(where + " references undeclared " + to_string(v.kind()) + " '" + v.display() + "'");
            }
        }
    };
    for (std::size_t i = 0; i < spec.rhs.size(); ++i) {
        std::string st = i < spec.states.size() ? spec.states[i].name() : std::to_string(i);
        check(spec.rhs[i], "equation for '" + st + "'");
    }
    for (const auto &o : spec.outputs) {
        check(o.expr, "output '" + o.name + "'");
    }
    for (auto p : spec.parameters) {
        if (!used.count(p)) {
            out.push_back({Sev::Warning, 0, 0, "parameter '" + p.name() + "' appears in no equation"});
        }
    }
    return out;
}

std::string to_source(const ModelSpec &spec)
{
    auto join = [](const std::vector<Variable> &vs) {
        std::string s;
        for (auto v : vs) {
            if (!s.empty()) {
                s += ", ";
            }
            s += v.name();
        }
        return s;
    };
    std::ostringstream os;
    os << "model " << (spec.name.empty() ? "model" : spec.name) << '\n';
    os << "states " << join(spec.states) << '\n';
    if (!spec.parameters.empty()) {
        os << "params " << join(spec.parameters) << '\n';
    }
    if (!spec.inputs.empty()) {
        os << "inputs " << join(spec.inputs) << '\n';
    }
    os << "odes\n";
    for (std::size_t i = 0; i < spec.states.size(); ++i) {
        os << "  " << spec.states[i].name() << "' = " << spec.rhs[i].str() << '\n';
    }
    os << "outputs\n";
    for (const auto &o : spec.outputs) {
        os << "  " << o.name << " = " << o.expr.str() << '\n';
    }
    os << "end\n";
    return os.str();
}

} // namespace psym
