#include "powerq/calculus.hpp"
#include "powerq/error.hpp"
#include "powerq/variational.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace powerq;

namespace {

RealFunction fn(const char* text)
{
    return RealFunction::parse(text);
}

const QuantumParams P1(1, 0.5);

VariationalProblem example1(const QuantumParams& p, double beta)
{
    return VariationalProblem(p, example1_lagrangian(), 0.0, 1.0, 0.0, beta);
}

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

TEST(VariationalProblem, Validation)
{
    EXPECT_EQ(kind_of([] { VariationalProblem(P1, example1_lagrangian(), 1.0, 0.0, 0.0, 1.0); }), ErrorKind::domain);
    EXPECT_EQ(kind_of([] { VariationalProblem(QuantumParams(3, 0.25), example1_lagrangian(), 0.0, 2.0, 0.0, 1.0); }),
              ErrorKind::horizon);
}

TEST(Variation, EndpointsMustVanish)
{
    EXPECT_NO_THROW(Variation(fn("t*(1-t)"), 0.0, 1.0));
    EXPECT_EQ(kind_of([] { Variation(fn("t"), 0.0, 1.0); }), ErrorKind::domain);
    std::mt19937_64 rng(1);
    const Variation v = random_variation(-0.5, 0.8, rng);
    EXPECT_EQ(v.p()(-0.5), 0.0);
    EXPECT_EQ(v.p()(0.8), 0.0);
}

TEST(FunctionalValue, Examples)
{
    const VariationalProblem vsq(P1, Lagrangian::parse("v^2"), 0.0, 1.0, 3.0, 3.0);
    EXPECT_EQ(functional_value(vsq, fn("3")).value, 0.0);

    const VariationalProblem one(P1, Lagrangian::parse("1"), 0.0, 1.0, 0.0, 0.0);
    EXPECT_NEAR(functional_value(one, fn("0")).value, 1.0, 1e-12);

    // along y = t^2/1.5 the integrand is t^2/1.5 * q^2 + t^2/2 on the lattice
    const IntegralResult r = functional_value(example1(P1, 2.0 / 3.0), fn("t^2/1.5"));
    EXPECT_TRUE(r.converged);
    const double direct = integral(P1, fn("0.25*t^2/1.5 + 0.5*t^2"), 0.0, 1.0).value;
    EXPECT_NEAR(r.value, direct, 1e-14);
}

TEST(FirstVariation, ZeroDirection)
{
    const VariationalProblem prob = example1(P1, 2.0 / 3.0);
    const Variation zero(fn("0"), 0.0, 1.0);
    EXPECT_EQ(first_variation(prob, fn("t"), zero), 0.0);
    EXPECT_EQ(first_variation_fd(prob, fn("t"), zero), 0.0);
}

TEST(FirstVariation, ZeroTrajectory)
{
    const VariationalProblem prob = example1(P1, 0.0);
    const Variation p(fn("t*(1-t)"), 0.0, 1.0);
    const double want = integral(P1, fn("0.5*t*(1 - 0.5*t)"), 0.0, 1.0).value;
    EXPECT_NEAR(first_variation(prob, fn("0"), p), want, 1e-14);
}

TEST(FirstVariation, VanishesAtExtremal)
{
    std::mt19937_64 rng(30);
    for (double q : {0.5, 0.9}) {
        const QuantumParams p(1, q);
        const VariationalProblem prob = example1(p, 1.0 / (1.0 + q));
        const RealFunction y = example1_extremal(p, 1.0 / (1.0 + q));
        for (int i = 0; i < 10; ++i) {
            const Variation v = random_variation(0.0, 1.0, rng);
            EXPECT_LE(std::abs(first_variation(prob, y, v)), 1e-6);
            EXPECT_LE(std::abs(first_variation_fd(prob, y, v)), 1e-6);
        }
    }
}

TEST(FirstVariation, QuadraticLagrangianMatchesDifference)
{
    std::mt19937_64 rng(31);
    const VariationalProblem prob(QuantumParams(3, 0.5), Lagrangian::parse("u^2 + t*u*v + 0.5*v^2"), -0.5, 0.9,
                                  0.0, 0.0);
    const RealFunction y = fn("sin(t) + t^2");
    for (int i = 0; i < 5; ++i) {
        const Variation v = random_variation(-0.5, 0.9, rng);
        const double exact = first_variation(prob, y, v);
        EXPECT_NEAR(first_variation_fd(prob, y, v), exact, 1e-8 * (1.0 + std::abs(exact)));
    }
}

TEST(ElResidual, ExtremalOfExample1)
{
    const VariationalProblem prob = example1(P1, 2.0 / 3.0);
    EXPECT_LE(std::abs(el_residual(prob, fn("t^2/1.5"), 0.5)), 1e-10);
}

TEST(ElResidual, IndependentOfTrajectory)
{
    const VariationalProblem prob(P1, Lagrangian::parse("t^2"), 0.0, 1.0, 0.0, 1.0);
    EXPECT_EQ(el_residual(prob, fn("exp(t)"), 0.25), 0.0);
}

TEST(ElResidual, PerturbedTrajectoryIsNotExtremal)
{
    const VariationalProblem prob = example1(P1, 2.0 / 3.0);
    const RealFunction y = fn("t^2/1.5 + t*(1-t)");
    // D^2 of t - t^2 is -1.5, so the residual is -1.5 everywhere
    for (double t : {0.5, 0.25, 0.125}) {
        EXPECT_NEAR(el_residual(prob, y, t), -1.5, 1e-9);
    }
}

TEST(ElResidual, RequiresLatticePoint)
{
    const VariationalProblem prob = example1(P1, 2.0 / 3.0);
    EXPECT_EQ(kind_of([&] { el_residual(prob, fn("t"), 0.3); }), ErrorKind::domain);
    EXPECT_NO_THROW(el_residual(prob, fn("t"), 0.0));
}

TEST(Example1, ExtremalMatchesClosedForm)
{
    for (double q : {0.5, 0.9}) {
        const QuantumParams p(1, q);
        const RealFunction y = example1_extremal(p, 1.0 / (1.0 + q));
        EXPECT_NEAR(example1_constant(p, 1.0 / (1.0 + q)), 0.0, 1e-10);
        for (const LatticeInterval lattice = build_interval(p, 0.0, 1.0, 1e-6); double t : lattice.points()) {
            EXPECT_NEAR(y(t), t * t / (1.0 + q), 1e-8) << "q=" << q << " t=" << t;
        }
    }
}

TEST(Example1, ZeroBoundaryValue)
{
    const RealFunction y = example1_extremal(P1, 0.0);
    EXPECT_EQ(y(0.0), 0.0);
    EXPECT_NEAR(y(1.0), 0.0, 1e-12);
}

TEST(Example1, ResidualAcrossExponents)
{
    const QuantumParams p(3, 0.5);
    const double beta = 0.4;
    const VariationalProblem prob = example1(p, beta);
    const RealFunction y = example1_extremal(p, beta);
    EXPECT_NEAR(y(1.0), beta, 1e-12);
    for (const LatticeInterval lattice = build_interval(p, 0.0, 1.0, 1e-6); double t : lattice.points()) {
        EXPECT_LE(std::abs(el_residual(prob, y, t)), 1e-8) << t;
    }
}

TEST(NormE, Examples)
{
    const LatticeInterval li = build_interval(P1, 0.0, 1.0, 1e-6);
    EXPECT_EQ(norm_E(P1, fn("0"), li), 0.0);
    EXPECT_DOUBLE_EQ(norm_E(P1, fn("t"), li), 2.0);
    EXPECT_EQ(norm_E(P1, fn("-2.5"), li), 2.5);
}

TEST(Leitmann, TrivialTransform)
{
    const Lagrangian f = example1_lagrangian();
    const GaugeTerm zero = [](const RealFunction&) { return RealFunction::constant(0.0); };
    const Transform id = [](const RealFunction& y) { return y; };
    EXPECT_EQ(leitmann_residual(P1, f, f, zero, id, fn("sin(t)"), 0.5), 0.0);
}

TEST(Leitmann, LinearGauge)
{
    const Lagrangian f = Lagrangian::parse("v^2 + 0.75");
    const Lagrangian fbar = Lagrangian::parse("v^2");
    const GaugeTerm G = [](const RealFunction&) { return fn("0.75*t - 4"); };
    const Transform id = [](const RealFunction& y) { return y; };
    EXPECT_NEAR(leitmann_residual(P1, f, fbar, G, id, fn("t^3"), 0.5), 0.0, 1e-14);
}

TEST(Example4, CoefficientsForUnitWeight)
{
    const Example4Coefficients c = example4_coefficients(0.0, 1.0, 0.0, 1.0, fn("1"));
    EXPECT_DOUBLE_EQ(c.A, 1.0);
    EXPECT_DOUBLE_EQ(c.C, 0.0);
    const LatticeInterval li = build_interval(P1, 0.0, 1.0, 1e-6);
    const RealFunction y = example4_solution(li, 2.0, 5.0, fn("1"));
    for (double t : li.points()) {
        EXPECT_NEAR(y(t), 3.0 * t + 2.0, 1e-15);
    }
}

TEST(Example4, QuadraticWeightBoundary)
{
    const RealFunction g = fn("1 + t^2");
    const Example4Coefficients c = example4_coefficients(0.0, 1.0, 1.0, 1.0, g);
    EXPECT_DOUBLE_EQ(c.A, 1.0);
    EXPECT_DOUBLE_EQ(c.C, 1.0);
    const RealFunction y = example4_solution(build_interval(P1, 0.0, 1.0, 1e-6), 1.0, 1.0, g);
    EXPECT_EQ(y(0.0), 1.0);
    EXPECT_EQ(y(1.0), 1.0);
}

TEST(Example4, IdentityResidual)
{
    for (const char* gtext : {"1", "1 + t^2", "exp(t)"}) {
        const RealFunction g = fn(gtext);
        const Example4Coefficients c = example4_coefficients(0.0, 1.0, 1.0, 2.0, g);
        const double B = c.C - 1.0;
        const Lagrangian L = example4_lagrangian(P1, g);
        const Transform z = example4_transform(c.A, B, g);
        const GaugeTerm G = example4_gauge(c.A, B, g);
        const RealFunction ybar = RealFunction::constant(1.0) / g;
        for (const LatticeInterval lattice = build_interval(P1, 0.0, 1.0, 1e-4); double t : lattice.points()) {
            EXPECT_LE(leitmann_residual(P1, L, L, G, z, ybar, t), 1e-9) << gtext << " t=" << t;
        }
    }
}

TEST(Example4, VanishingWeightIsRejected)
{
    const LatticeInterval li = build_interval(P1, 0.0, 1.0, 0.1);
    try {
        example4_solution(li, 1.0, 2.0, fn("t - 0.5"));
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::domain);
        ASSERT_TRUE(e.location().has_value());
        EXPECT_EQ(*e.location(), 0.5);
    }
}
