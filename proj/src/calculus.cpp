#include "powerq/calculus.hpp"

#include "powerq/error.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <functional>
#include <limits>

namespace powerq {

namespace {

bool on_singular_set(const QuantumParams& params, double t, const DiffConfig& cfg)
{
    const double th = params.n() == 1 ? 1.0 : params.theta();
    return in_singular_set(params, t, cfg.singular_atol * std::max(1.0, th));
}

double binomial(int m, int k)
{
    double c = 1.0;
    for (int i = 1; i <= k; ++i) {
        c = c * (m - k + i) / i;
    }
    return c;
}

[[noreturn]] void numeric_fault(const std::string& what, double t)
{
    throw Error(ErrorKind::numeric, what + " at t=" + std::to_string(t), t);
}

} // namespace

void DiffConfig::validate() const
{
    if (!(singular_atol > 0.0) || !(degenerate_gap > 0.0) || !(fd_step_scale > 0.0)) {
        throw_domain("DiffConfig fields must be strictly positive");
    }
    if (degenerate_gap < 10.0 * DBL_EPSILON) {
        throw_domain("DiffConfig degenerate_gap must be at least 10 machine epsilons");
    }
}

bool uses_classical_branch(const QuantumParams& params, double t, const DiffConfig& cfg)
{
    return on_singular_set(params, t, cfg) || std::abs(h_apply(params, t) - t) < cfg.degenerate_gap;
}

double classical_derivative(const RealFunction& f, double t, const DiffConfig& cfg)
{
    if (f.has_derivative()) {
        return f.derivative()(t);
    }
    const double step = cfg.fd_step_scale * std::max(1.0, std::abs(t));
    return (f(t + step) - f(t - step)) / (2.0 * step);
}

double classical_derivative_m(const RealFunction& f, double t, int m, const DiffConfig& cfg)
{
    if (m < 0) {
        throw_domain("derivative order must be nonnegative");
    }
    if (m == 0) {
        return f(t);
    }
    if (f.has_derivative()) {
        return classical_derivative_m(f.derivative(), t, m - 1, cfg);
    }
    if (m == 1) {
        return classical_derivative(f, t, cfg);
    }
    // Central stencil sum_j (-1)^j C(m,j) f(t + (m/2 - j) h) / h^m.
    const double step = std::max(1.0, std::abs(t)) * std::pow(DBL_EPSILON, 1.0 / (m + 2));
    double acc = 0.0;
    for (int j = 0; j <= m; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        acc += sign * binomial(m, j) * f(t + (0.5 * m - j) * step);
    }
    return acc / std::pow(step, m);
}

double d_nq(const QuantumParams& params, const RealFunction& f, double t, const DiffConfig& cfg)
{
    double value = 0.0;
    if (uses_classical_branch(params, t, cfg)) {
        value = classical_derivative(f, t, cfg);
    } else {
        const double ht = h_apply(params, t);
        value = (f(ht) - f(t)) / (ht - t);
    }
    if (!std::isfinite(value)) {
        numeric_fault("non-finite n,q-derivative", t);
    }
    return value;
}

RealFunction d_nq_function(const QuantumParams& params, const RealFunction& f, const DiffConfig& cfg)
{
    return RealFunction([params, f, cfg](double s) { return d_nq(params, f, s, cfg); });
}

double d_nq_m(const QuantumParams& params, const RealFunction& f, double t, int m, const DiffConfig& cfg)
{
    if (m < 0) {
        throw_domain("derivative order must be nonnegative");
    }
    if (m == 0) {
        return f(t);
    }
    if (on_singular_set(params, t, cfg)) {
        return classical_derivative_m(f, t, m, cfg);
    }

    const std::vector<double> pts = orbit(params, t, static_cast<std::size_t>(m) + 1);
    std::vector<double> vals(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        vals[i] = f(pts[i]);
    }

    // Only built when an orbit point falls into the degenerate-gap band.
    std::vector<RealFunction> iterated{f};
    auto iterate_to = [&](int j) -> const RealFunction& {
        while (static_cast<int>(iterated.size()) <= j) {
            iterated.push_back(d_nq_function(params, iterated.back(), cfg));
        }
        return iterated[static_cast<std::size_t>(j)];
    };

    // After pass j, vals[i] holds D^j f(h^i t) for i <= m - j.
    for (int j = 1; j <= m; ++j) {
        for (int i = 0; i + j <= m; ++i) {
            const double s = pts[static_cast<std::size_t>(i)];
            double next = 0.0;
            if (uses_classical_branch(params, s, cfg)) {
                next = classical_derivative(iterate_to(j - 1), s, cfg);
            } else {
                next = (vals[static_cast<std::size_t>(i) + 1] - vals[static_cast<std::size_t>(i)]) /
                       (pts[static_cast<std::size_t>(i) + 1] - s);
            }
            if (!std::isfinite(next)) {
                numeric_fault("non-finite higher n,q-derivative", s);
            }
            vals[static_cast<std::size_t>(i)] = next;
        }
    }
    return vals[0];
}

RealFunction precompose_h(const QuantumParams& params, const RealFunction& f)
{
    if (f.expression()) {
        const Expr h = Expr::literal(params.q()) *
                       pow(Expr::variable(Var::t), Expr::literal(static_cast<double>(params.n())));
        return f.compose(RealFunction::from_expr(h));
    }
    RealFunction::Callable fh = [params, f](double s) { return f(h_apply(params, s)); };
    if (f.has_derivative()) {
        return RealFunction(std::move(fh), [params, df = f.derivative()](double s) {
            const double dh = params.q() * params.n() * std::pow(s, params.n() - 1);
            return df(h_apply(params, s)) * dh;
        });
    }
    return RealFunction(std::move(fh));
}

RuleResiduals rule_residuals(const QuantumParams& params, const RealFunction& f, const RealFunction& g, double t,
                             const DiffConfig& cfg, double scalar)
{
    const double ht = h_apply(params, t);
    const double ft = f(t);
    const double gt = g(t);
    const double fh = f(ht);
    const double gh = g(ht);
    const double df = d_nq(params, f, t, cfg);
    const double dg = d_nq(params, g, t, cfg);
    const double dfg = d_nq(params, f * g, t, cfg);

    RuleResiduals r;
    r.sum = std::abs(d_nq(params, f + g, t, cfg) - (df + dg));
    r.scalar = std::abs(d_nq(params, scalar * f, t, cfg) - scalar * df);
#ifdef POWERQ_MUTATE_PRODUCT_RULE
    r.product1 = std::abs(dfg - (df * gt + ft * dg));
#else
    r.product1 = std::abs(dfg - (df * gt + fh * dg));
#endif
    r.product2 = std::abs(dfg - (ft * dg + df * gh));

    double largest = std::max({std::abs(ft), std::abs(gt), std::abs(fh), std::abs(gh), std::abs(df), std::abs(dg),
                               std::abs(dfg), std::abs(df * gt), std::abs(fh * dg), std::abs(ft * dg),
                               std::abs(df * gh), std::abs(scalar * df)});
    if (gt * gh != 0.0) {
        const double dq = d_nq(params, f / g, t, cfg);
        const double rhs = (df * gt - ft * dg) / (gt * gh);
        r.quotient = std::abs(dq - rhs);
        largest = std::max({largest, std::abs(dq), std::abs(df * gt / (gt * gh)), std::abs(ft * dg / (gt * gh))});
    }
    r.scale = 1.0 + largest;
    return r;
}

OpString OpString::from_string(std::string_view text)
{
    std::vector<Op> ops;
    ops.reserve(text.size());
    for (char c : text) {
        if (c == 'D') {
            ops.push_back(Op::D);
        } else if (c == 'H') {
            ops.push_back(Op::H);
        } else {
            throw_domain(std::string("operator strings use only 'D' and 'H', got '") + c + "'");
        }
    }
    return OpString(std::move(ops));
}

std::size_t OpString::count(Op op) const noexcept
{
    return static_cast<std::size_t>(std::count(ops_.begin(), ops_.end(), op));
}

std::string OpString::to_string() const
{
    std::string s;
    for (Op op : ops_) {
        s.push_back(static_cast<char>(op));
    }
    return s;
}

std::vector<OpString> leibniz_strings(int m, int k)
{
    if (m < 0 || k < 0 || k > m) {
        throw_domain("leibniz_strings requires 0 <= k <= m");
    }
    std::vector<OpString> out;
    std::vector<Op> word;
    word.reserve(static_cast<std::size_t>(m));
    std::function<void(int, int)> build = [&](int d_left, int h_left) {
        if (d_left == 0 && h_left == 0) {
            out.emplace_back(word);
            return;
        }
        if (d_left > 0) {
            word.push_back(Op::D);
            build(d_left - 1, h_left);
            word.pop_back();
        }
        if (h_left > 0) {
            word.push_back(Op::H);
            build(d_left, h_left - 1);
            word.pop_back();
        }
    };
    build(m - k, k);
    return out;
}

double apply_op_string(const QuantumParams& params, const OpString& s, const RealFunction& f, double t,
                       const DiffConfig& cfg)
{
    RealFunction u = f;
    for (auto it = s.ops().rbegin(); it != s.ops().rend(); ++it) {
        u = (*it == Op::H) ? precompose_h(params, u) : d_nq_function(params, u, cfg);
    }
    return u(t);
}

LeibnizSides leibniz_lhs_rhs(const QuantumParams& params, const RealFunction& f, const RealFunction& g, double t,
                             int m, const DiffConfig& cfg)
{
    if (m < 1) {
        throw_domain("Leibniz formula requires m >= 1");
    }
    LeibnizSides sides;
    sides.lhs = d_nq_m(params, f * g, t, m, cfg);
    double magnitude = std::abs(sides.lhs);

    if (on_singular_set(params, t, cfg)) {
        for (int k = 0; k <= m; ++k) {
            const double term =
                binomial(m, k) * d_nq_m(params, f, t, m - k, cfg) * d_nq_m(params, g, t, k, cfg);
            sides.rhs += term;
            magnitude += std::abs(term);
        }
    } else {
        for (int k = 0; k <= m; ++k) {
            double string_sum = 0.0;
            for (const OpString& word : leibniz_strings(m, k)) {
                string_sum += apply_op_string(params, word, f, t, cfg);
            }
            const double term = string_sum * d_nq_m(params, g, t, k, cfg);
            sides.rhs += term;
            magnitude += std::abs(term);
        }
    }
    sides.scale = 1.0 + magnitude;
    return sides;
}

double chain_rule_witness(const QuantumParams& params, const RealFunction& f_outer, const RealFunction& g_inner,
                          double t, double tol, const DiffConfig& cfg)
{
    if (on_singular_set(params, t, cfg)) {
        throw_domain("chain rule witness is not defined on the singular set; the classical chain rule applies", t);
    }
    if (!f_outer.has_derivative()) {
        throw_domain("chain rule witness needs the outer function's classical derivative");
    }
    const double ht = h_apply(params, t);
    const double target = d_nq(params, f_outer.compose(g_inner), t, cfg);
    const double dg = d_nq(params, g_inner, t, cfg);

    if (dg == 0.0 && std::abs(target) <= tol) {
        return 0.5 * (ht + t);
    }

    const RealFunction fprime = f_outer.derivative();
    auto phi = [&](double c) { return fprime(g_inner(c)) * dg - target; };

    constexpr int subdivisions = 64;
    const double lo = std::min(ht, t);
    const double hi = std::max(ht, t);
    const double width = (hi - lo) / subdivisions;

    double left = lo;
    double phi_left = phi(left);
    for (int i = 0; i < subdivisions; ++i) {
        if (std::abs(phi_left) <= tol) {
            return left;
        }
        const double right = (i + 1 == subdivisions) ? hi : lo + (i + 1) * width;
        const double phi_right = phi(right);
        if (std::signbit(phi_left) != std::signbit(phi_right)) {
            double a = left;
            double b = right;
            double phi_a = phi_left;
            for (int iter = 0; iter < 200; ++iter) {
                const double mid = 0.5 * (a + b);
                const double phi_mid = phi(mid);
                if (std::abs(phi_mid) <= tol) {
                    return mid;
                }
                if (b - a <= 4.0 * DBL_EPSILON * std::max(1.0, std::abs(mid))) {
                    break;
                }
                if (std::signbit(phi_mid) == std::signbit(phi_a)) {
                    a = mid;
                    phi_a = phi_mid;
                } else {
                    b = mid;
                }
            }
            if (std::abs(phi(b)) <= tol) {
                return b;
            }
            throw Error(ErrorKind::witness_not_located,
                        "bisection stalled before reaching the requested tolerance", t);
        }
        left = right;
        phi_left = phi_right;
    }
    if (std::abs(phi_left) <= tol) {
        return left;
    }
    throw Error(ErrorKind::witness_not_located, "no sign change of the chain-rule residual was found", t);
}

} // namespace powerq
