#pragma once

#include "powerq/expr.hpp"

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string_view>

namespace powerq {

/// A real function of one variable: either an expression in t (with symbolic
/// derivatives of every order) or a native callable, optionally paired with
/// its classical first derivative.
class RealFunction {
public:
    using Callable = std::function<double(double)>;

    explicit RealFunction(Callable f);
    RealFunction(Callable f, Callable derivative);

    /// Throws Error(unbound_variable) if the body mentions u or v.
    static RealFunction from_expr(const Expr& body);
    static RealFunction parse(std::string_view text);
    static RealFunction constant(double c);
    static RealFunction identity();

    double operator()(double t) const { return state_->eval(t); }

    bool has_derivative() const noexcept;
    /// Classical derivative; throws Error(domain) when none is available.
    RealFunction derivative() const;

    /// The expression body when this function was built from one.
    const std::optional<Expr>& expression() const noexcept { return state_->expr; }

    /// this(inner(t)); symbolic when both sides are expressions.
    RealFunction compose(const RealFunction& inner) const;

    friend RealFunction operator+(const RealFunction& f, const RealFunction& g);
    friend RealFunction operator-(const RealFunction& f, const RealFunction& g);
    friend RealFunction operator*(const RealFunction& f, const RealFunction& g);
    friend RealFunction operator/(const RealFunction& f, const RealFunction& g);
    friend RealFunction operator*(double c, const RealFunction& f);

private:
    struct State {
        Callable eval;
        std::optional<Expr> expr;
        std::optional<Callable> first_derivative;
        mutable std::once_flag derivative_once;
        mutable std::shared_ptr<const State> derivative_cache;
    };

    explicit RealFunction(std::shared_ptr<const State> state) : state_(std::move(state)) {}
    std::shared_ptr<const State> state_;
};

/// An integrand f(t, u, v) together with its partials in u and v.
class Lagrangian {
public:
    using Callable = std::function<double(double, double, double)>;

    Lagrangian(Callable body, Callable d2, Callable d3);

    /// Derives d2 = df/du and d3 = df/dv symbolically.
    static Lagrangian from_expr(const Expr& body);
    static Lagrangian parse(std::string_view text);

    double operator()(double t, double u, double v) const { return body_(t, u, v); }
    double d2(double t, double u, double v) const { return d2_(t, u, v); }
    double d3(double t, double u, double v) const { return d3_(t, u, v); }

    const std::optional<Expr>& expression() const noexcept { return expr_; }

private:
    Callable body_;
    Callable d2_;
    Callable d3_;
    std::optional<Expr> expr_;
};

} // namespace powerq
