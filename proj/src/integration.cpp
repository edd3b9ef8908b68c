#include "powerq/integration.hpp"

#include "powerq/error.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

namespace powerq {

namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double x) noexcept
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

void require_converged(const IntegralResult& r, const char* what)
{
    if (!r.converged) {
        throw Error(ErrorKind::non_convergence,
                    std::string(what) + ": series did not converge within " + std::to_string(r.terms_used) + " terms");
    }
}

} // namespace

void SeriesConfig::validate() const
{
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
        throw_domain("series tolerances must be positive");
    }
    if (min_terms < 1 || min_terms > max_terms || max_terms > 1000000) {
        throw_domain("series term limits must satisfy 1 <= min_terms <= max_terms <= 1000000");
    }
    if (consecutive_small < 1) {
        throw_domain("consecutive_small must be at least 1");
    }
}

IntegralResult antiderivative_at(const QuantumParams& params, const RealFunction& f, double t,
                                 const SeriesConfig& cfg)
{
    cfg.validate();
    if (!params.inside_horizon(t)) {
        throw Error(ErrorKind::horizon, "antiderivative series diverges for |t| >= theta", t);
    }

    IntegralResult result;
    CompensatedSum sum;
    int small = 0;
    double x = t;
    for (int k = 0; k < cfg.max_terms; ++k) {
        const double hx = h_apply(params, x);
        const double weight = x - hx;
        const double term = (weight == 0.0) ? 0.0 : weight * f(x);
        if (!std::isfinite(term)) {
            throw Error(ErrorKind::numeric, "non-finite term in antiderivative series", x);
        }
        sum.add(term);
        result.terms_used = k + 1;
        result.last_term = term;

        if (std::abs(term) <= cfg.abs_tol + cfg.rel_tol * std::abs(sum.value())) {
            ++small;
        } else {
            small = 0;
        }
        if (result.terms_used >= cfg.min_terms && small >= cfg.consecutive_small) {
            result.converged = true;
            break;
        }
        x = hx;
    }
    result.value = sum.value();
    return result;
}

RealFunction antiderivative_function(const QuantumParams& params, const RealFunction& f, const SeriesConfig& cfg)
{
    return RealFunction([params, f, cfg](double s) { return antiderivative_at(params, f, s, cfg).value; });
}

IntegralResult integral(const QuantumParams& params, const RealFunction& f, double a, double b,
                        const SeriesConfig& cfg)
{
    const IntegralResult fa = antiderivative_at(params, f, a, cfg);
    const IntegralResult fb = antiderivative_at(params, f, b, cfg);
    IntegralResult r;
    r.value = fb.value - fa.value;
    r.terms_used = fa.terms_used + fb.terms_used;
    r.last_term = std::abs(fa.last_term) > std::abs(fb.last_term) ? fa.last_term : fb.last_term;
    r.converged = fa.converged && fb.converged;
    return r;
}

double ftc_residual(const QuantumParams& params, const RealFunction& f, double a, double b, const SeriesConfig& cfg,
                    const DiffConfig& diff_cfg)
{
    const IntegralResult r = integral(params, d_nq_function(params, f, diff_cfg), a, b, cfg);
    require_converged(r, "ftc_residual");
    return std::abs(r.value - (f(b) - f(a)));
}

ShortIntegral short_integral_identity(const QuantumParams& params, const RealFunction& f, double t,
                                      const SeriesConfig& cfg)
{
    const double ht = h_apply(params, t);
    return {integral(params, f, t, ht, cfg).value, (ht - t) * f(t)};
}

double by_parts_residual(const QuantumParams& params, const RealFunction& f, const RealFunction& g, double a,
                         double b, const SeriesConfig& cfg, const DiffConfig& diff_cfg)
{
    const RealFunction f_dg([params, f, g, diff_cfg](double s) { return f(s) * d_nq(params, g, s, diff_cfg); });
    const RealFunction df_gh([params, f, g, diff_cfg](double s) {
        return d_nq(params, f, s, diff_cfg) * g(h_apply(params, s));
    });
    const IntegralResult i1 = integral(params, f_dg, a, b, cfg);
    const IntegralResult i2 = integral(params, df_gh, a, b, cfg);
    require_converged(i1, "by_parts_residual");
    require_converged(i2, "by_parts_residual");
    return std::abs(i1.value + i2.value - (f(b) * g(b) - f(a) * g(a)));
}

bool monotonicity_check(const QuantumParams& params, const RealFunction& f, const RealFunction& g, double s,
                        double a, double b, const SeriesConfig& cfg)
{
    if (!(a < b)) {
        throw_domain("monotonicity_check requires a < b");
    }
    const std::optional<int> ka = forward_orbit_index(params, s, a);
    const std::optional<int> kb = forward_orbit_index(params, s, b);
    if (!ka) {
        throw_domain("a is not on the forward orbit of s", a);
    }
    if (!kb) {
        throw_domain("b is not on the forward orbit of s", b);
    }

    const int lo = std::min(*ka, *kb);
    const int hi = std::max(*ka, *kb);
    double x = h_iterate(params, s, lo);
    for (int k = lo; k <= hi; ++k) {
        if (!(std::abs(f(x)) <= g(x))) {
            throw_domain("pointwise bound |f| <= g fails on the orbit", x);
        }
        x = h_apply(params, x);
    }

    const double int_f = integral(params, f, a, b, cfg).value;
    const double int_g = integral(params, g, a, b, cfg).value;
    const double tol = 1e-12 * (1.0 + std::abs(int_f) + std::abs(int_g));
    return std::abs(int_f) <= int_g + tol && int_g >= -tol;
}

RealFunction counterexample_function(double q)
{
    if (!(q > 0.0 && q < 1.0)) {
        throw_domain("counterexample_function requires 0 < q < 1");
    }
    // powers[m] = q^m by repeated multiplication, matching h applied to 1.
    auto powers = std::make_shared<std::vector<double>>();
    for (double p = 1.0; p > 0.0; p *= q) {
        powers->push_back(p);
        if (p * q == p) {
            break;
        }
    }

    return RealFunction([q, powers](double x) {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw_domain("counterexample function is defined on [0, 1] only", x);
        }
        if (x == 0.0) {
            return 0.0;
        }
        const std::vector<double>& pm = *powers;
        std::size_t m = 0;
        while (m + 1 < pm.size() && x <= pm[m + 1]) {
            ++m;
        }
        const double scaled = x / pm[m];
        if (x <= pm[m] * (1.0 + q) / 2.0) {
            return (4.0 * scaled - (1.0 + 3.0 * q)) / (1.0 - q);
        }
        return 4.0 * (1.0 - scaled) / (1.0 - q) - 1.0;
    });
}

} // namespace powerq
