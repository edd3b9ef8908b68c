#pragma once

#include "powerq/calculus.hpp"
#include "powerq/function.hpp"
#include "powerq/lattice.hpp"

namespace powerq {

/// Truncation policy for the antiderivative series.
struct SeriesConfig {
    double rel_tol = 1e-12;
    double abs_tol = 1e-300;
    int min_terms = 8;
    int max_terms = 100000;
    /// Number of successive small terms required before stopping.
    int consecutive_small = 3;

    /// Throws Error(domain) unless tolerances are positive and
    /// 1 <= min_terms <= max_terms <= 1e6, consecutive_small >= 1.
    void validate() const;
};

struct IntegralResult {
    double value = 0.0;
    int terms_used = 0;
    double last_term = 0.0;
    bool converged = false;
};

/// F(t) = sum_k (h^k(t) - h^{k+1}(t)) f(h^k(t)), summed in ascending k with
/// compensation. Throws Error(horizon) for |t| >= theta. Running out of
/// max_terms is reported through `converged`, not thrown.
IntegralResult antiderivative_at(const QuantumParams& params, const RealFunction& f, double t,
                                 const SeriesConfig& cfg = {});

/// s -> antiderivative_at(s).value
RealFunction antiderivative_function(const QuantumParams& params, const RealFunction& f, const SeriesConfig& cfg = {});

/// F(b) - F(a). `converged` requires both legs; `terms_used` is their sum and
/// `last_term` the larger of the two final terms in magnitude.
IntegralResult integral(const QuantumParams& params, const RealFunction& f, double a, double b,
                        const SeriesConfig& cfg = {});

/// |int_a^b D f - (f(b) - f(a))|. Throws Error(non_convergence) if a leg of
/// the series did not settle.
double ftc_residual(const QuantumParams& params, const RealFunction& f, double a, double b,
                    const SeriesConfig& cfg = {}, const DiffConfig& diff_cfg = {});

struct ShortIntegral {
    double lhs = 0.0; ///< int_t^{h(t)} f
    double rhs = 0.0; ///< (h(t) - t) f(t)
};

ShortIntegral short_integral_identity(const QuantumParams& params, const RealFunction& f, double t,
                                      const SeriesConfig& cfg = {});

/// |int f Dg + int Df (g o h) - (f(b)g(b) - f(a)g(a))| over [a, b].
double by_parts_residual(const QuantumParams& params, const RealFunction& f, const RealFunction& g, double a,
                         double b, const SeriesConfig& cfg = {}, const DiffConfig& diff_cfg = {});

/// For a < b both on the forward orbit of s, checks |int_a^b f| <= int_a^b g
/// and int_a^b g >= 0. Throws Error(domain) if a or b is off the orbit, or if
/// |f| <= g fails at an orbit point between them.
bool monotonicity_check(const QuantumParams& params, const RealFunction& f, const RealFunction& g, double s,
                        double a, double b, const SeriesConfig& cfg = {});

/// The piecewise-linear function on [0, 1] (n = 1) that equals -1 at q^m and
/// +1 at q^m (1+q)/2. Its integral over [(1+q)/2, 1] is -(3+q)/2 while the
/// integral of its absolute value is (1-q)/2. Throws Error(domain) outside [0, 1].
RealFunction counterexample_function(double q);

} // namespace powerq
