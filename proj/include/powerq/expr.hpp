#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace powerq {

enum class Var { t, u, v };

enum class Func { sin, cos, exp, ln, abs, sqrt };

std::string_view to_string(Var var) noexcept;
std::string_view to_string(Func func) noexcept;

/// Immutable expression tree over the variables t, u, v. Copies share nodes.
class Expr {
public:
    enum class Kind { literal, variable, add, sub, mul, div, pow, neg, call };

    struct Node;

    /// The literal 0.
    Expr();

    static Expr literal(double value);
    static Expr variable(Var var);
    static Expr call(Func func, Expr arg);
    static Expr binary(Kind kind, Expr lhs, Expr rhs);
    static Expr negate(Expr arg);

    Kind kind() const noexcept;
    double value() const noexcept;   ///< literal only
    Var var() const noexcept;        ///< variable only
    Func func() const noexcept;      ///< call only
    const Expr& lhs() const noexcept; ///< binary nodes, and the operand of neg/call
    const Expr& rhs() const noexcept; ///< binary nodes only

    bool is_literal(double v) const noexcept;
    bool depends_on(Var var) const noexcept;

    /// Structural equality (literals compared bitwise by value).
    friend bool operator==(const Expr& a, const Expr& b) noexcept;

private:
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Builders that fold constants and drop neutral elements. parse() does not
/// use them; it keeps the tree exactly as written.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent);

/// Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | power
///   power  := atom ('^' factor)?
///   atom   := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'
/// The Unicode minus sign U+2212 is accepted wherever '-' is.
/// Throws SyntaxError (with byte offset) or Error(unknown_identifier).
Expr parse(std::string_view text);

/// Canonical, fully parenthesised serialisation; parse(print(e)) == e for
/// every tree produced by parse().
std::string print(const Expr& e);

class Bindings {
public:
    Bindings() = default;
    Bindings(double t) { set(Var::t, t); }
    Bindings(double t, double u, double v)
    {
        set(Var::t, t);
        set(Var::u, u);
        set(Var::v, v);
    }

    Bindings& set(Var var, double value)
    {
        values_[static_cast<std::size_t>(var)] = value;
        return *this;
    }
    const std::optional<double>& get(Var var) const { return values_[static_cast<std::size_t>(var)]; }

private:
    std::array<std::optional<double>, 3> values_;
};

/// Real evaluation. Throws Error(unbound_variable) or Error(eval_domain) for
/// ln/sqrt of out-of-range arguments, 0 to a negative power, or a negative
/// base with a non-integer exponent. Overflow follows IEEE semantics.
double eval(const Expr& e, const Bindings& bindings);

struct Derivative {
    Expr expr;
    /// Set when abs() was differentiated; the result is undefined where its
    /// argument vanishes.
    bool weakly_differentiable = false;
};

/// Exact symbolic classical derivative with constant folding only.
Derivative diff_classical(const Expr& e, Var var);

/// Replace every occurrence of `var` with `replacement`.
Expr substitute(const Expr& e, Var var, const Expr& replacement);

} // namespace powerq
