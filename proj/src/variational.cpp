#include "powerq/variational.hpp"

#include "powerq/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace powerq {

namespace {

struct Along {
    double u;
    double v;
};

Along along(const VariationalProblem& prob, const RealFunction& y, double t)
{
    return {y(h_apply(prob.params, t)), d_nq(prob.params, y, t, prob.diff_cfg)};
}

bool on_lattice(const QuantumParams& params, double a, double b, double t)
{
    return t == 0.0 || forward_orbit_index(params, a, t).has_value() || forward_orbit_index(params, b, t).has_value();
}

} // namespace

VariationalProblem::VariationalProblem(QuantumParams params_, Lagrangian lagrangian_, double a_, double b_,
                                       double alpha_, double beta_, SeriesConfig series_cfg_, DiffConfig diff_cfg_)
    : params(params_), lagrangian(std::move(lagrangian_)), a(a_), b(b_), alpha(alpha_), beta(beta_),
      series_cfg(series_cfg_), diff_cfg(diff_cfg_)
{
    if (!(a < b)) {
        throw_domain("variational problem requires a < b");
    }
    for (double end : {a, b}) {
        if (!params.inside_horizon(end)) {
            throw Error(ErrorKind::horizon, "endpoint lies outside (-theta, theta)", end);
        }
    }
    series_cfg.validate();
    diff_cfg.validate();
}

Variation::Variation(RealFunction p, double a, double b) : p_(std::move(p))
{
    if (std::abs(p_(a)) > endpoint_tol) {
        throw_domain("variation does not vanish at a", a);
    }
    if (std::abs(p_(b)) > endpoint_tol) {
        throw_domain("variation does not vanish at b", b);
    }
}

Variation random_variation(double a, double b, std::mt19937_64& rng, int degree)
{
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    const Expr t = Expr::variable(Var::t);
    Expr r = Expr::literal(coeff(rng));
    Expr power = t;
    for (int i = 1; i <= degree; ++i) {
        r = r + Expr::literal(coeff(rng)) * power;
        power = power * t;
    }
    const Expr p = (t - Expr::literal(a)) * (Expr::literal(b) - t) * r;
    return Variation(RealFunction::from_expr(p), a, b);
}

IntegralResult functional_value(const VariationalProblem& prob, const RealFunction& y)
{
    const RealFunction integrand([&prob, y](double s) {
        const Along w = along(prob, y, s);
        return prob.lagrangian(s, w.u, w.v);
    });
    return integral(prob.params, integrand, prob.a, prob.b, prob.series_cfg);
}

double first_variation(const VariationalProblem& prob, const RealFunction& y, const Variation& var)
{
    const RealFunction& p = var.p();
    const RealFunction integrand([&prob, y, p](double s) {
        const Along w = along(prob, y, s);
        return prob.lagrangian.d2(s, w.u, w.v) * p(h_apply(prob.params, s)) +
               prob.lagrangian.d3(s, w.u, w.v) * d_nq(prob.params, p, s, prob.diff_cfg);
    });
    return integral(prob.params, integrand, prob.a, prob.b, prob.series_cfg).value;
}

double first_variation_fd(const VariationalProblem& prob, const RealFunction& y, const Variation& var,
                          double eps_step)
{
    if (!(eps_step > 0.0)) {
        throw_domain("first_variation_fd step must be positive");
    }
    const double plus = functional_value(prob, y + eps_step * var.p()).value;
    const double minus = functional_value(prob, y - eps_step * var.p()).value;
    return (plus - minus) / (2.0 * eps_step);
}

double el_residual(const VariationalProblem& prob, const RealFunction& y, double t)
{
    if (!on_lattice(prob.params, prob.a, prob.b, t)) {
        throw_domain("el_residual is evaluated on the lattice of [a, b] only", t);
    }
    const RealFunction momentum([&prob, y](double s) {
        const Along w = along(prob, y, s);
        return prob.lagrangian.d3(s, w.u, w.v);
    });
    const Along w = along(prob, y, t);
    return d_nq(prob.params, momentum, t, prob.diff_cfg) - prob.lagrangian.d2(t, w.u, w.v);
}

double example1_constant(const QuantumParams& params, double beta, const SeriesConfig& cfg)
{
    if (!(params.theta() > 1.0)) {
        throw Error(ErrorKind::horizon, "the extremal on [0, 1] needs theta > 1", 1.0);
    }
    // sum_k Delta_k q^{[k]} and sum_k Delta_k are minus these two antiderivatives at 1.
    const IntegralResult moment = antiderivative_at(params, RealFunction::identity(), 1.0, cfg);
    const IntegralResult mass = antiderivative_at(params, RealFunction::constant(1.0), 1.0, cfg);
    if (!moment.converged || !mass.converged) {
        throw Error(ErrorKind::non_convergence, "series for the extremal constant did not converge", 1.0);
    }
    return (beta - moment.value) / mass.value;
}

RealFunction example1_extremal(const QuantumParams& params, double beta, const SeriesConfig& cfg)
{
    const double c = example1_constant(params, beta, cfg);
    const RealFunction integrand = RealFunction::identity() + RealFunction::constant(c);
    return antiderivative_function(params, integrand, cfg);
}

Lagrangian example1_lagrangian()
{
    return Lagrangian::parse("u + 0.5*v^2");
}

double norm_E(const QuantumParams& params, const RealFunction& y, const LatticeInterval& interval,
              const DiffConfig& diff_cfg)
{
    double sup_y = 0.0;
    double sup_dy = 0.0;
    for (double t : interval.points()) {
        sup_y = std::max(sup_y, std::abs(y(t)));
        sup_dy = std::max(sup_dy, std::abs(d_nq(params, y, t, diff_cfg)));
    }
    return sup_y + sup_dy;
}

double leitmann_residual(const QuantumParams& params, const Lagrangian& f, const Lagrangian& fbar,
                         const GaugeTerm& G, const Transform& z, const RealFunction& ybar, double t,
                         const DiffConfig& diff_cfg)
{
    const RealFunction y = z(ybar);
    const double ht = h_apply(params, t);
    const double lhs = f(t, y(ht), d_nq(params, y, t, diff_cfg)) - fbar(t, ybar(ht), d_nq(params, ybar, t, diff_cfg));
    const double rhs = d_nq(params, G(ybar), t, diff_cfg);
    return std::abs(lhs - rhs);
}

Lagrangian example4_lagrangian(const QuantumParams& params, const RealFunction& g, const DiffConfig& diff_cfg)
{
    auto inner = [params, g, diff_cfg](double t, double u, double v) {
        return v * g(t) + u * d_nq(params, g, t, diff_cfg);
    };
    return Lagrangian(
        [inner](double t, double u, double v) {
            const double w = inner(t, u, v);
            return w * w;
        },
        [inner, params, g, diff_cfg](double t, double u, double v) {
            return 2.0 * inner(t, u, v) * d_nq(params, g, t, diff_cfg);
        },
        [inner, g](double t, double u, double v) { return 2.0 * inner(t, u, v) * g(t); });
}

Example4Coefficients example4_coefficients(double a, double b, double alpha, double beta, const RealFunction& g)
{
    if (a == b) {
        throw_domain("Example-4 coefficients need a != b");
    }
    const double ga = g(a);
    const double gb = g(b);
    return {(alpha * ga - beta * gb) / (a - b), (a * beta * gb - b * alpha * ga) / (a - b)};
}

Transform example4_transform(double A, double B, const RealFunction& g)
{
    return [A, B, g](const RealFunction& ybar) {
        const RealFunction line = RealFunction::from_expr(Expr::literal(A) * Expr::variable(Var::t) + Expr::literal(B));
        return ybar + line / g;
    };
}

GaugeTerm example4_gauge(double A, double B, const RealFunction& g)
{
    return [A, B, g](const RealFunction& ybar) {
        const RealFunction line = RealFunction::from_expr(Expr::literal(A) * Expr::variable(Var::t) + Expr::literal(B));
        return A * (2.0 * (ybar * g) + line);
    };
}

RealFunction example4_solution(const LatticeInterval& interval, double alpha, double beta, const RealFunction& g)
{
    for (double t : interval.points()) {
        if (g(t) == 0.0) {
            throw_domain("g vanishes at lattice point t=" + std::to_string(t), t);
        }
    }
    const Example4Coefficients k = example4_coefficients(interval.a(), interval.b(), alpha, beta, g);
    const RealFunction line =
        RealFunction::from_expr(Expr::literal(k.A) * Expr::variable(Var::t) + Expr::literal(k.C));
    return line / g;
}

} // namespace powerq
