#include "powerq/expr.hpp"

#include "powerq/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>
#include <vector>

namespace powerq {

struct Expr::Node {
    Kind kind = Kind::literal;
    double value = 0.0;
    Var var = Var::t;
    Func func = Func::sin;
    Expr lhs;
    Expr rhs;
};

std::string_view to_string(Var var) noexcept
{
    switch (var) {
    case Var::t: return "t";
    case Var::u: return "u";
    case Var::v: return "v";
    }
    return "?";
}

std::string_view to_string(Func func) noexcept
{
    switch (func) {
    case Func::sin: return "sin";
    case Func::cos: return "cos";
    case Func::exp: return "exp";
    case Func::ln: return "ln";
    case Func::abs: return "abs";
    case Func::sqrt: return "sqrt";
    }
    return "?";
}

// A null node is the literal 0; it keeps default construction non-recursive.
Expr::Expr() = default;

Expr Expr::literal(double value)
{
    auto node = std::make_shared<Node>();
    node->kind = Kind::literal;
    node->value = value;
    return Expr(std::move(node));
}

Expr Expr::variable(Var var)
{
    auto node = std::make_shared<Node>();
    node->kind = Kind::variable;
    node->var = var;
    return Expr(std::move(node));
}

Expr Expr::call(Func func, Expr arg)
{
    auto node = std::make_shared<Node>();
    node->kind = Kind::call;
    node->func = func;
    node->lhs = std::move(arg);
    return Expr(std::move(node));
}

Expr Expr::binary(Kind kind, Expr lhs, Expr rhs)
{
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->lhs = std::move(lhs);
    node->rhs = std::move(rhs);
    return Expr(std::move(node));
}

Expr Expr::negate(Expr arg)
{
    auto node = std::make_shared<Node>();
    node->kind = Kind::neg;
    node->lhs = std::move(arg);
    return Expr(std::move(node));
}

Expr::Kind Expr::kind() const noexcept
{
    return node_ ? node_->kind : Kind::literal;
}

double Expr::value() const noexcept
{
    return node_ ? node_->value : 0.0;
}

Var Expr::var() const noexcept
{
    return node_ ? node_->var : Var::t;
}

Func Expr::func() const noexcept
{
    return node_ ? node_->func : Func::sin;
}

const Expr& Expr::lhs() const noexcept
{
    static const Expr zero;
    return node_ ? node_->lhs : zero;
}

const Expr& Expr::rhs() const noexcept
{
    static const Expr zero;
    return node_ ? node_->rhs : zero;
}

bool Expr::is_literal(double v) const noexcept
{
    return kind() == Kind::literal && value() == v;
}

bool Expr::depends_on(Var v) const noexcept
{
    switch (kind()) {
    case Kind::literal: return false;
    case Kind::variable: return var() == v;
    case Kind::neg:
    case Kind::call: return lhs().depends_on(v);
    default: return lhs().depends_on(v) || rhs().depends_on(v);
    }
}

bool operator==(const Expr& a, const Expr& b) noexcept
{
    if (a.kind() != b.kind()) {
        return false;
    }
    switch (a.kind()) {
    case Expr::Kind::literal: return a.value() == b.value() && std::signbit(a.value()) == std::signbit(b.value());
    case Expr::Kind::variable: return a.var() == b.var();
    case Expr::Kind::neg: return a.lhs() == b.lhs();
    case Expr::Kind::call: return a.func() == b.func() && a.lhs() == b.lhs();
    default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    }
}

// ---------------------------------------------------------------------------
// folding builders

namespace {

bool is_lit(const Expr& e)
{
    return e.kind() == Expr::Kind::literal;
}

} // namespace

Expr operator+(const Expr& a, const Expr& b)
{
    if (is_lit(a) && is_lit(b)) {
        return Expr::literal(a.value() + b.value());
    }
    if (a.is_literal(0.0)) {
        return b;
    }
    if (b.is_literal(0.0)) {
        return a;
    }
    return Expr::binary(Expr::Kind::add, a, b);
}

Expr operator-(const Expr& a, const Expr& b)
{
    if (is_lit(a) && is_lit(b)) {
        return Expr::literal(a.value() - b.value());
    }
    if (b.is_literal(0.0)) {
        return a;
    }
    if (a.is_literal(0.0)) {
        return -b;
    }
    return Expr::binary(Expr::Kind::sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b)
{
    if (is_lit(a) && is_lit(b)) {
        return Expr::literal(a.value() * b.value());
    }
    if (a.is_literal(0.0) || b.is_literal(0.0)) {
        return Expr::literal(0.0);
    }
    if (a.is_literal(1.0)) {
        return b;
    }
    if (b.is_literal(1.0)) {
        return a;
    }
    return Expr::binary(Expr::Kind::mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b)
{
    if (is_lit(a) && is_lit(b) && b.value() != 0.0) {
        return Expr::literal(a.value() / b.value());
    }
    if (a.is_literal(0.0)) {
        return Expr::literal(0.0);
    }
    if (b.is_literal(1.0)) {
        return a;
    }
    return Expr::binary(Expr::Kind::div, a, b);
}

Expr operator-(const Expr& a)
{
    if (is_lit(a)) {
        return Expr::literal(-a.value());
    }
    if (a.kind() == Expr::Kind::neg) {
        return a.lhs();
    }
    return Expr::negate(a);
}

Expr pow(const Expr& base, const Expr& exponent)
{
    if (exponent.is_literal(0.0)) {
        return Expr::literal(1.0);
    }
    if (exponent.is_literal(1.0)) {
        return base;
    }
    if (is_lit(base) && is_lit(exponent)) {
        const double r = std::pow(base.value(), exponent.value());
        if (std::isfinite(r)) {
            return Expr::literal(r);
        }
    }
    return Expr::binary(Expr::Kind::pow, base, exponent);
}

// ---------------------------------------------------------------------------
// parser

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr parse_all()
    {
        Expr e = parse_expr();
        skip_ws();
        if (pos_ < text_.size()) {
            fail("unexpected trailing input", {"+", "-", "*", "/", "^", "end of input"});
        }
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what, std::vector<std::string> expected) const
    {
        std::string msg = what + " at offset " + std::to_string(pos_);
        if (!expected.empty()) {
            msg += "; expected one of:";
            for (const auto& e : expected) {
                msg += " '" + e + "'";
            }
        }
        throw SyntaxError(msg, pos_, std::move(expected));
    }

    void skip_ws()
    {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                       text_[pos_] == '\r')) {
            ++pos_;
        }
    }

    // Consumes '-' or U+2212 (E2 88 92).
    bool accept_minus()
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '-') {
            ++pos_;
            return true;
        }
        if (text_.substr(pos_, 3) == "\xE2\x88\x92") {
            pos_ += 3;
            return true;
        }
        return false;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr parse_expr()
    {
        Expr e = parse_term();
        for (;;) {
            if (accept('+')) {
                e = Expr::binary(Expr::Kind::add, e, parse_term());
            } else if (accept_minus()) {
                e = Expr::binary(Expr::Kind::sub, e, parse_term());
            } else {
                return e;
            }
        }
    }

    Expr parse_term()
    {
        Expr e = parse_factor();
        for (;;) {
            if (accept('*')) {
                e = Expr::binary(Expr::Kind::mul, e, parse_factor());
            } else if (accept('/')) {
                e = Expr::binary(Expr::Kind::div, e, parse_factor());
            } else {
                return e;
            }
        }
    }

    Expr parse_factor()
    {
        if (accept_minus()) {
            return Expr::negate(parse_factor());
        }
        return parse_power();
    }

    Expr parse_power()
    {
        Expr base = parse_atom();
        if (accept('^')) {
            return Expr::binary(Expr::Kind::pow, base, parse_factor());
        }
        return base;
    }

    static bool is_ident_char(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }

    Expr parse_atom()
    {
        skip_ws();
        if (pos_ >= text_.size()) {
            fail("unexpected end of input", {"number", "identifier", "(", "-"});
        }
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return parse_number();
        }
        if (is_ident_char(c)) {
            return parse_identifier();
        }
        if (accept('(')) {
            Expr inner = parse_expr();
            if (!accept(')')) {
                fail("unbalanced parenthesis", {")"});
            }
            return inner;
        }
        fail("unexpected character", {"number", "identifier", "(", "-"});
    }

    Expr parse_number()
    {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t mantissa = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            mantissa += digits();
        }
        if (mantissa == 0) {
            pos_ = start;
            fail("malformed number", {"digit"});
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            const std::size_t save = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
                ++pos_;
            }
            if (digits() == 0) {
                pos_ = save + 1;
                fail("malformed exponent", {"digit"});
            }
        }
        double value = 0.0;
        const char* first = text_.data() + start;
        const char* last = text_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last) {
            pos_ = start;
            fail("number out of range", {});
        }
        return Expr::literal(value);
    }

    Expr parse_identifier()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (is_ident_char(text_[pos_]) || std::isdigit(static_cast<unsigned char>(text_[pos_])))) {
            ++pos_;
        }
        const std::string_view name = text_.substr(start, pos_ - start);

        static constexpr std::pair<std::string_view, Var> vars[] = {{"t", Var::t}, {"u", Var::u}, {"v", Var::v}};
        static constexpr std::pair<std::string_view, Func> funcs[] = {
            {"sin", Func::sin}, {"cos", Func::cos}, {"exp", Func::exp},
            {"ln", Func::ln},   {"abs", Func::abs}, {"sqrt", Func::sqrt}};

        for (const auto& [vname, var] : vars) {
            if (name == vname) {
                return Expr::variable(var);
            }
        }
        for (const auto& [fname, func] : funcs) {
            if (name == fname) {
                if (!accept('(')) {
                    fail("function '" + std::string(name) + "' requires a parenthesised argument", {"("});
                }
                Expr arg = parse_expr();
                if (!accept(')')) {
                    fail("unclosed call to '" + std::string(name) + "'", {")"});
                }
                return Expr::call(func, arg);
            }
        }
        throw SyntaxError("unknown identifier '" + std::string(name) + "' at offset " + std::to_string(start), start,
                          {"t", "u", "v", "sin", "cos", "exp", "ln", "abs", "sqrt"}, ErrorKind::unknown_identifier);
    }
};

} // namespace

Expr parse(std::string_view text)
{
    return Parser(text).parse_all();
}

// ---------------------------------------------------------------------------
// printer

namespace {

void print_into(const Expr& e, std::string& out)
{
    using K = Expr::Kind;
    switch (e.kind()) {
    case K::literal: {
        const double v = e.value();
        char buf[64];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, std::abs(v));
        (void)ec;
        if (std::signbit(v)) {
            out += "(-";
            out.append(buf, ptr);
            out += ')';
        } else {
            out.append(buf, ptr);
        }
        return;
    }
    case K::variable: out += to_string(e.var()); return;
    case K::neg:
        out += "(-";
        print_into(e.lhs(), out);
        out += ')';
        return;
    case K::call:
        out += to_string(e.func());
        out += '(';
        print_into(e.lhs(), out);
        out += ')';
        return;
    default: break;
    }
    const char* op = " + ";
    switch (e.kind()) {
    case K::sub: op = " - "; break;
    case K::mul: op = " * "; break;
    case K::div: op = " / "; break;
    case K::pow: op = " ^ "; break;
    default: break;
    }
    out += '(';
    print_into(e.lhs(), out);
    out += op;
    print_into(e.rhs(), out);
    out += ')';
}

} // namespace

std::string print(const Expr& e)
{
    std::string out;
    print_into(e, out);
    return out;
}

// ---------------------------------------------------------------------------
// evaluation

namespace {

[[noreturn]] void eval_fault(const std::string& what, double at)
{
    throw Error(ErrorKind::eval_domain, what, at);
}

double apply(Func f, double x)
{
    switch (f) {
    case Func::sin: return std::sin(x);
    case Func::cos: return std::cos(x);
    case Func::exp: return std::exp(x);
    case Func::ln:
        if (!(x > 0.0)) {
            eval_fault("ln of nonpositive argument", x);
        }
        return std::log(x);
    case Func::abs: return std::abs(x);
    case Func::sqrt:
        if (x < 0.0) {
            eval_fault("sqrt of negative argument", x);
        }
        return std::sqrt(x);
    }
    return 0.0;
}

double power(double base, double exponent)
{
    if (base < 0.0 && std::trunc(exponent) != exponent) {
        eval_fault("negative base raised to a non-integer exponent", base);
    }
    if (base == 0.0 && exponent < 0.0) {
        eval_fault("zero raised to a negative exponent", base);
    }
    return std::pow(base, exponent);
}

} // namespace

double eval(const Expr& e, const Bindings& bindings)
{
    using K = Expr::Kind;
    switch (e.kind()) {
    case K::literal: return e.value();
    case K::variable: {
        const auto& value = bindings.get(e.var());
        if (!value) {
            throw Error(ErrorKind::unbound_variable, "variable '" + std::string(to_string(e.var())) + "' is unbound");
        }
        return *value;
    }
    case K::add: return eval(e.lhs(), bindings) + eval(e.rhs(), bindings);
    case K::sub: return eval(e.lhs(), bindings) - eval(e.rhs(), bindings);
    case K::mul: return eval(e.lhs(), bindings) * eval(e.rhs(), bindings);
    case K::div: return eval(e.lhs(), bindings) / eval(e.rhs(), bindings);
    case K::pow: return power(eval(e.lhs(), bindings), eval(e.rhs(), bindings));
    case K::neg: return -eval(e.lhs(), bindings);
    case K::call: return apply(e.func(), eval(e.lhs(), bindings));
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// differentiation

namespace {

Expr d(const Expr& e, Var var, bool& weak)
{
    using K = Expr::Kind;
    const Expr& a = e.lhs();
    const Expr& b = e.rhs();
    switch (e.kind()) {
    case K::literal: return Expr::literal(0.0);
    case K::variable: return Expr::literal(e.var() == var ? 1.0 : 0.0);
    case K::add: return d(a, var, weak) + d(b, var, weak);
    case K::sub: return d(a, var, weak) - d(b, var, weak);
    case K::mul: return d(a, var, weak) * b + a * d(b, var, weak);
    case K::div: return (d(a, var, weak) * b - a * d(b, var, weak)) / pow(b, Expr::literal(2.0));
    case K::neg: return -d(a, var, weak);
    case K::pow:
        if (!b.depends_on(var)) {
            return b * pow(a, b - Expr::literal(1.0)) * d(a, var, weak);
        }
        if (!a.depends_on(var)) {
            return pow(a, b) * Expr::call(Func::ln, a) * d(b, var, weak);
        }
        return pow(a, b) * (d(b, var, weak) * Expr::call(Func::ln, a) + b * d(a, var, weak) / a);
    case K::call: {
        const Expr da = d(a, var, weak);
        switch (e.func()) {
        case Func::sin: return Expr::call(Func::cos, a) * da;
        case Func::cos: return -(Expr::call(Func::sin, a) * da);
        case Func::exp: return Expr::call(Func::exp, a) * da;
        case Func::ln: return da / a;
        case Func::sqrt: return da / (Expr::literal(2.0) * Expr::call(Func::sqrt, a));
        case Func::abs:
            weak = true;
            return a / Expr::call(Func::abs, a) * da;
        }
        break;
    }
    }
    return Expr::literal(0.0);
}

} // namespace

Derivative diff_classical(const Expr& e, Var var)
{
    Derivative out;
    out.expr = d(e, var, out.weakly_differentiable);
    return out;
}

Expr substitute(const Expr& e, Var var, const Expr& replacement)
{
    using K = Expr::Kind;
    switch (e.kind()) {
    case K::literal: return e;
    case K::variable: return e.var() == var ? replacement : e;
    case K::neg: return Expr::negate(substitute(e.lhs(), var, replacement));
    case K::call: return Expr::call(e.func(), substitute(e.lhs(), var, replacement));
    default:
        return Expr::binary(e.kind(), substitute(e.lhs(), var, replacement), substitute(e.rhs(), var, replacement));
    }
}

} // namespace powerq
