#include "powerq/function.hpp"

#include "powerq/error.hpp"

#include <utility>

namespace powerq {

namespace {

RealFunction::Callable expr_callable(const Expr& e)
{
    return [e](double t) { return eval(e, Bindings(t)); };
}

} // namespace

RealFunction::RealFunction(Callable f)
{
    auto state = std::make_shared<State>();
    state->eval = std::move(f);
    state_ = std::move(state);
}

RealFunction::RealFunction(Callable f, Callable derivative)
{
    auto state = std::make_shared<State>();
    state->eval = std::move(f);
    state->first_derivative = std::move(derivative);
    state_ = std::move(state);
}

RealFunction RealFunction::from_expr(const Expr& body)
{
    for (Var var : {Var::u, Var::v}) {
        if (body.depends_on(var)) {
            throw Error(ErrorKind::unbound_variable,
                        "a function of t may not mention '" + std::string(to_string(var)) + "'");
        }
    }
    auto state = std::make_shared<State>();
    state->eval = expr_callable(body);
    state->expr = body;
    return RealFunction(std::shared_ptr<const State>(std::move(state)));
}

RealFunction RealFunction::parse(std::string_view text)
{
    return from_expr(powerq::parse(text));
}

RealFunction RealFunction::constant(double c)
{
    return from_expr(Expr::literal(c));
}

RealFunction RealFunction::identity()
{
    return from_expr(Expr::variable(Var::t));
}

bool RealFunction::has_derivative() const noexcept
{
    return state_->expr.has_value() || state_->first_derivative.has_value();
}

RealFunction RealFunction::derivative() const
{
    if (state_->expr) {
        std::call_once(state_->derivative_once, [this] {
            auto d = std::make_shared<State>();
            d->expr = diff_classical(*state_->expr, Var::t).expr;
            d->eval = expr_callable(*d->expr);
            state_->derivative_cache = std::move(d);
        });
        return RealFunction(state_->derivative_cache);
    }
    if (state_->first_derivative) {
        return RealFunction(*state_->first_derivative);
    }
    throw Error(ErrorKind::domain, "function carries no classical derivative");
}

RealFunction RealFunction::compose(const RealFunction& inner) const
{
    if (expression() && inner.expression()) {
        return from_expr(substitute(*expression(), Var::t, *inner.expression()));
    }
    const RealFunction outer = *this;
    Callable f = [outer, inner](double t) { return outer(inner(t)); };
    if (outer.has_derivative() && inner.has_derivative()) {
        const RealFunction douter = outer.derivative();
        const RealFunction dinner = inner.derivative();
        return RealFunction(std::move(f), [inner, douter, dinner](double t) { return douter(inner(t)) * dinner(t); });
    }
    return RealFunction(std::move(f));
}

RealFunction operator+(const RealFunction& f, const RealFunction& g)
{
    if (f.expression() && g.expression()) {
        return RealFunction::from_expr(*f.expression() + *g.expression());
    }
    RealFunction::Callable sum = [f, g](double t) { return f(t) + g(t); };
    if (f.has_derivative() && g.has_derivative()) {
        return RealFunction(std::move(sum),
                            [df = f.derivative(), dg = g.derivative()](double t) { return df(t) + dg(t); });
    }
    return RealFunction(std::move(sum));
}

RealFunction operator-(const RealFunction& f, const RealFunction& g)
{
    if (f.expression() && g.expression()) {
        return RealFunction::from_expr(*f.expression() - *g.expression());
    }
    RealFunction::Callable diff = [f, g](double t) { return f(t) - g(t); };
    if (f.has_derivative() && g.has_derivative()) {
        return RealFunction(std::move(diff),
                            [df = f.derivative(), dg = g.derivative()](double t) { return df(t) - dg(t); });
    }
    return RealFunction(std::move(diff));
}

RealFunction operator*(const RealFunction& f, const RealFunction& g)
{
    if (f.expression() && g.expression()) {
        return RealFunction::from_expr(*f.expression() * *g.expression());
    }
    RealFunction::Callable prod = [f, g](double t) { return f(t) * g(t); };
    if (f.has_derivative() && g.has_derivative()) {
        return RealFunction(std::move(prod), [f, g, df = f.derivative(), dg = g.derivative()](double t) {
            return df(t) * g(t) + f(t) * dg(t);
        });
    }
    return RealFunction(std::move(prod));
}

RealFunction operator/(const RealFunction& f, const RealFunction& g)
{
    if (f.expression() && g.expression()) {
        return RealFunction::from_expr(*f.expression() / *g.expression());
    }
    RealFunction::Callable quot = [f, g](double t) { return f(t) / g(t); };
    if (f.has_derivative() && g.has_derivative()) {
        return RealFunction(std::move(quot), [f, g, df = f.derivative(), dg = g.derivative()](double t) {
            const double gt = g(t);
            return (df(t) * gt - f(t) * dg(t)) / (gt * gt);
        });
    }
    return RealFunction(std::move(quot));
}

RealFunction operator*(double c, const RealFunction& f)
{
    if (f.expression()) {
        return RealFunction::from_expr(Expr::literal(c) * *f.expression());
    }
    RealFunction::Callable scaled = [c, f](double t) { return c * f(t); };
    if (f.has_derivative()) {
        return RealFunction(std::move(scaled), [c, df = f.derivative()](double t) { return c * df(t); });
    }
    return RealFunction(std::move(scaled));
}

Lagrangian::Lagrangian(Callable body, Callable d2, Callable d3)
    : body_(std::move(body)), d2_(std::move(d2)), d3_(std::move(d3))
{
}

Lagrangian Lagrangian::from_expr(const Expr& body)
{
    auto wrap = [](Expr e) -> Callable {
        return [e = std::move(e)](double t, double u, double v) { return eval(e, Bindings(t, u, v)); };
    };
    Lagrangian lagrangian(wrap(body), wrap(diff_classical(body, Var::u).expr), wrap(diff_classical(body, Var::v).expr));
    lagrangian.expr_ = body;
    return lagrangian;
}

Lagrangian Lagrangian::parse(std::string_view text)
{
    return from_expr(powerq::parse(text));
}

} // namespace powerq
