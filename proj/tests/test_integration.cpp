#include "powerq/calculus.hpp"
#include "powerq/error.hpp"
#include "powerq/integration.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace powerq;

namespace {

RealFunction fn(const char* text)
{
    return RealFunction::parse(text);
}

const QuantumParams P1(1, 0.5);
const QuantumParams P3(3, 0.5);

ErrorKind kind_of(const std::function<void()>& body)
{
    try {
        body();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected an Error";
    return ErrorKind::numeric;
}

} // namespace

TEST(Antiderivative, Examples)
{
    EXPECT_EQ(antiderivative_at(P3, fn("0"), 0.7).value, 0.0);
    // telescoping: the partial sum after K terms is t (1 - q^K)
    const IntegralResult one = antiderivative_at(P1, fn("1"), 0.8);
    EXPECT_NEAR(one.value, 0.8 * (1.0 - std::pow(0.5, one.terms_used)), 1e-15);
    EXPECT_NEAR(one.value, 0.8, 1e-12);
    const IntegralResult r = antiderivative_at(P1, fn("t"), 1.0);
    EXPECT_NEAR(r.value, 2.0 / 3.0, 1e-14);
    EXPECT_TRUE(r.converged);
    EXPECT_GE(r.terms_used, 8);
}

TEST(Antiderivative, AtZeroIsZero)
{
    const IntegralResult r = antiderivative_at(P3, fn("exp(t)"), 0.0);
    EXPECT_EQ(r.value, 0.0);
    EXPECT_TRUE(r.converged);
}

TEST(Antiderivative, HorizonError)
{
    const QuantumParams p(3, 0.25); // theta = 2
    EXPECT_EQ(kind_of([&] { antiderivative_at(p, fn("t"), 2.0); }), ErrorKind::horizon);
    EXPECT_EQ(kind_of([&] { antiderivative_at(p, fn("t"), -2.5); }), ErrorKind::horizon);
    EXPECT_NO_THROW(antiderivative_at(p, fn("t"), 1.99));
}

TEST(Antiderivative, ReportsNonConvergence)
{
    SeriesConfig cfg;
    cfg.max_terms = 10;
    const IntegralResult r = antiderivative_at(QuantumParams(1, 0.99), fn("1"), 1.0, cfg);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.terms_used, 10);
    EXPECT_NEAR(r.value, 1.0 - std::pow(0.99, 10), 1e-14);
}

TEST(Antiderivative, NonFiniteTermIsNumericFault)
{
    EXPECT_EQ(kind_of([] { antiderivative_at(P1, fn("1/(t - 0.25)"), 1.0); }), ErrorKind::numeric);
}

TEST(SeriesConfig, Validation)
{
    EXPECT_NO_THROW(SeriesConfig{}.validate());
    SeriesConfig c;
    c.rel_tol = 0.0;
    EXPECT_THROW(c.validate(), Error);
    c = SeriesConfig{};
    c.min_terms = 0;
    EXPECT_THROW(c.validate(), Error);
    c = SeriesConfig{};
    c.max_terms = 5; // below min_terms
    EXPECT_THROW(c.validate(), Error);
    c = SeriesConfig{};
    c.consecutive_small = 0;
    EXPECT_THROW(c.validate(), Error);
}

TEST(Integral, Examples)
{
    EXPECT_EQ(integral(P3, fn("sin(t)"), 0.3, 0.3).value, 0.0);
    EXPECT_NEAR(integral(P1, fn("t"), 0.0, 1.0).value, 2.0 / 3.0, 1e-14);
    EXPECT_NEAR(integral(P1, fn("t"), 1.0, 0.0).value, -2.0 / 3.0, 1e-14);
}

TEST(Integral, JacksonClosedForm)
{
    for (double q : {0.3, 0.5, 0.9}) {
        const IntegralResult r = integral(QuantumParams(1, q), fn("t"), 0.0, 1.0);
        EXPECT_TRUE(r.converged);
        EXPECT_NEAR(r.value, 1.0 / (1.0 + q), 1e-10) << q;
    }
}

TEST(Integral, JacksonPartialSums)
{
    // a (1 - q) sum_k q^k f(a q^k), truncated at the same depth
    const RealFunction f = fn("exp(t) - t^2");
    for (double q : {0.3, 0.5, 0.9}) {
        for (double a : {1.0, -0.7, 0.4}) {
            SeriesConfig cfg;
            const IntegralResult r = antiderivative_at(QuantumParams(1, q), f, a, cfg);
            double jackson = 0.0;
            double qk = 1.0;
            for (int k = 0; k < r.terms_used; ++k) {
                jackson += a * (1.0 - q) * qk * f(a * qk);
                qk *= q;
            }
            EXPECT_NEAR(r.value, jackson, 1e-12 * std::max(1.0, std::abs(jackson))) << q << " " << a;
        }
    }
}

TEST(Integral, ConvergedRequiresBothLegs)
{
    SeriesConfig cfg;
    cfg.max_terms = 20;
    const QuantumParams p(1, 0.99);
    const IntegralResult r = integral(p, fn("1"), 0.0, 1.0, cfg);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.terms_used, 20 + antiderivative_at(p, fn("1"), 0.0, cfg).terms_used);
}

TEST(Integral, AlgebraicProperties)
{
    std::mt19937_64 rng(21);
    const RealFunction f = fn("t^3 - 2*t + 1");
    const RealFunction g = fn("exp(t)*cos(t)");
    for (const QuantumParams& p : {QuantumParams(1, 0.5), QuantumParams(3, 0.5), QuantumParams(3, 0.9)}) {
        const double r = std::min(0.95 * p.theta(), 1.5);
        std::uniform_real_distribution<double> pick(-r, r);
        for (int i = 0; i < 30; ++i) {
            double a = pick(rng), b = pick(rng), c = pick(rng);
            const double ab = integral(p, f, a, b).value;
            const double scale = 1.0 + std::abs(ab);
            EXPECT_NEAR(integral(p, 2.5 * f, a, b).value, 2.5 * ab, 1e-10 * 2.5 * scale);
            EXPECT_NEAR(integral(p, f, b, a).value, -ab, 1e-10 * scale);
            const double ac = integral(p, f, a, c).value;
            const double cb = integral(p, f, c, b).value;
            EXPECT_NEAR(ac + cb, ab, 1e-10 * (scale + std::abs(ac) + std::abs(cb)));
            const double fg = integral(p, f + g, a, b).value;
            const double gb = integral(p, g, a, b).value;
            EXPECT_NEAR(fg, ab + gb, 1e-10 * (scale + std::abs(gb)));
        }
    }
}

TEST(Ftc, Examples)
{
    EXPECT_LE(ftc_residual(P3, fn("t^2"), -0.5, 0.9), 1e-9);
    EXPECT_LE(ftc_residual(P1, fn("4.5"), -0.3, 0.8), 1e-15);
    EXPECT_LE(ftc_residual(P1, fn("t^3"), 0.0, 1.0), 1e-9);
}

TEST(Ftc, RandomPairs)
{
    std::mt19937_64 rng(22);
    for (const QuantumParams& p : {QuantumParams(1, 0.5), QuantumParams(3, 0.5), QuantumParams(3, 0.9)}) {
        const double r = std::min(0.95 * p.theta(), 1.5);
        std::uniform_real_distribution<double> pick(-r, r);
        for (const char* text : {"t^5 - t^2 + 3", "exp(t)", "sin(t)", "1/(1+t^2)"}) {
            for (int i = 0; i < 10; ++i) {
                const double a = pick(rng), b = pick(rng);
                EXPECT_LE(ftc_residual(p, fn(text), a, b), 1e-8) << text << " " << a << " " << b;
            }
        }
    }
}

TEST(Ftc, ThrowsWhenSeriesStalls)
{
    SeriesConfig cfg;
    cfg.max_terms = 10;
    EXPECT_EQ(kind_of([&] { ftc_residual(QuantumParams(1, 0.99), fn("t^2"), 0.0, 1.0, cfg); }),
              ErrorKind::non_convergence);
}

TEST(Ftc, DerivativeOfAntiderivative)
{
    for (const QuantumParams& p : {QuantumParams(1, 0.5), QuantumParams(3, 0.5)}) {
        const RealFunction f = fn("exp(t) + t^2");
        const RealFunction F = antiderivative_function(p, f);
        for (double t : {0.9, 0.6, -0.45}) {
            EXPECT_NEAR(d_nq(p, F, t), f(t), 1e-8);
        }
    }
}

TEST(ShortIntegral, Examples)
{
    const ShortIntegral a = short_integral_identity(P1, fn("1"), 1.0);
    EXPECT_NEAR(a.lhs, -0.5, 1e-12);
    EXPECT_EQ(a.rhs, -0.5);
    const ShortIntegral z = short_integral_identity(P3, fn("0"), 0.4);
    EXPECT_EQ(z.lhs, 0.0);
    EXPECT_EQ(z.rhs, 0.0);
    const ShortIntegral c = short_integral_identity(P3, fn("t^2"), 0.9);
    EXPECT_LE(std::abs(c.lhs - c.rhs), 1e-10);
}

TEST(ByParts, Examples)
{
    EXPECT_LE(by_parts_residual(P1, fn("1"), fn("t"), 0.0, 1.0), 1e-10);
    EXPECT_LE(by_parts_residual(P1, fn("t"), fn("t"), 0.0, 1.0), 1e-9);
    EXPECT_LE(by_parts_residual(P3, fn("t^2"), fn("t + 1"), -0.5, 0.5), 1e-9);
}

TEST(Monotonicity, TightWhenEqual)
{
    const double s = 0.9;
    EXPECT_TRUE(monotonicity_check(P1, fn("t^2"), fn("t^2"), s, h_iterate(P1, s, 3), s));
}

TEST(Monotonicity, AlternatingOrbitValues)
{
    // cos(pi log2 t) is (-1)^k on the orbit 2^-k of 1
    const RealFunction f([](double t) { return t * std::cos(std::numbers::pi * std::log2(t)); });
    const RealFunction g([](double t) { return std::abs(t * std::cos(std::numbers::pi * std::log2(t))); });
    EXPECT_TRUE(monotonicity_check(P1, f, g, 1.0, 0.125, 1.0));
}

TEST(Monotonicity, ConstantBound)
{
    const double s = 0.8;
    const double a = h_iterate(P1, s, 2);
    EXPECT_TRUE(monotonicity_check(P1, fn("0.5"), fn("1"), s, a, s));
    EXPECT_NEAR(integral(P1, fn("1"), a, s).value, s - a, 1e-12);
}

TEST(Monotonicity, Errors)
{
    EXPECT_EQ(kind_of([] { monotonicity_check(P1, fn("0.5"), fn("1"), 0.8, 0.3, 0.8); }), ErrorKind::domain);
    EXPECT_EQ(kind_of([] { monotonicity_check(P1, fn("0.5"), fn("1"), 0.8, 0.8, 0.4); }), ErrorKind::domain);
    EXPECT_EQ(kind_of([] { monotonicity_check(P1, fn("2"), fn("1"), 0.8, 0.4, 0.8); }), ErrorKind::domain);
}

TEST(Counterexample, BreakpointValues)
{
    const double q = 0.5;
    const RealFunction f = counterexample_function(q);
    for (int m = 1; m <= 5; ++m) {
        EXPECT_NEAR(f(std::pow(q, m)), -1.0, 1e-12) << m;
        EXPECT_NEAR(f(0.5 * (1.0 + q) * std::pow(q, m)), 1.0, 1e-12) << m;
    }
    EXPECT_NEAR(f(1.0), -1.0, 1e-12);
    EXPECT_EQ(f(0.0), 0.0);
}

TEST(Counterexample, PiecewiseLinearBetweenBreakpoints)
{
    const double q = 0.3;
    const RealFunction f = counterexample_function(q);
    const double lo = q * q;
    const double mid = 0.5 * (1.0 + q) * q;
    const double hi = q;
    EXPECT_NEAR(f(0.5 * (lo + mid)), 0.0, 1e-12);
    EXPECT_NEAR(f(0.5 * (mid + hi)), 0.0, 1e-12);
}

TEST(Counterexample, ClosedForms)
{
    for (double q : {0.3, 0.5, 0.7}) {
        const QuantumParams p(1, q);
        const RealFunction f = counterexample_function(q);
        const RealFunction abs_f([f](double x) { return std::abs(f(x)); });
        const double signed_int = integral(p, f, 0.5 * (1.0 + q), 1.0).value;
        const double abs_int = integral(p, abs_f, 0.5 * (1.0 + q), 1.0).value;
        EXPECT_NEAR(signed_int, -(3.0 + q) / 2.0, 1e-9) << q;
        EXPECT_NEAR(abs_int, (1.0 - q) / 2.0, 1e-9) << q;
        EXPECT_GT(std::abs(signed_int), abs_int);
    }
}

TEST(Counterexample, Errors)
{
    EXPECT_EQ(kind_of([] { counterexample_function(1.0); }), ErrorKind::domain);
    const RealFunction f = counterexample_function(0.5);
    EXPECT_EQ(kind_of([&] { f(1.5); }), ErrorKind::domain);
    EXPECT_EQ(kind_of([&] { f(-0.1); }), ErrorKind::domain);
    EXPECT_TRUE(std::isfinite(f(1e-300)));
}
