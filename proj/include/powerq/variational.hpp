#pragma once

#include "powerq/calculus.hpp"
#include "powerq/function.hpp"
#include "powerq/integration.hpp"
#include "powerq/lattice.hpp"

#include <functional>
#include <random>

namespace powerq {

/// Minimise L[y] = int_a^b f(t, y(h t), D y(t)) subject to y(a) = alpha, y(b) = beta.
struct VariationalProblem {
    /// Throws Error(domain) if a >= b, Error(horizon) if an endpoint lies outside (-theta, theta).
    VariationalProblem(QuantumParams params, Lagrangian lagrangian, double a, double b, double alpha, double beta,
                       SeriesConfig series_cfg = {}, DiffConfig diff_cfg = {});

    QuantumParams params;
    Lagrangian lagrangian;
    double a;
    double b;
    double alpha;
    double beta;
    SeriesConfig series_cfg;
    DiffConfig diff_cfg;
};

/// A perturbation direction p with p(a) = p(b) = 0.
class Variation {
public:
    static constexpr double endpoint_tol = 1e-12;

    /// Throws Error(domain) if |p(a)| or |p(b)| exceeds endpoint_tol.
    Variation(RealFunction p, double a, double b);

    const RealFunction& p() const noexcept { return p_; }

private:
    RealFunction p_;
};

/// p(t) = (t - a)(b - t) r(t) with r a polynomial of the given degree whose
/// coefficients are uniform in [-1, 1].
Variation random_variation(double a, double b, std::mt19937_64& rng, int degree = 3);

IntegralResult functional_value(const VariationalProblem& prob, const RealFunction& y);

/// int_a^b [d2 f * p(h t) + d3 f * D p(t)] with f's arguments taken along y.
double first_variation(const VariationalProblem& prob, const RealFunction& y, const Variation& var);

/// (L[y + eps p] - L[y - eps p]) / (2 eps)
double first_variation_fd(const VariationalProblem& prob, const RealFunction& y, const Variation& var,
                          double eps_step = 1e-5);

/// D[s -> d3 f(s, y(h s), D y(s))](t) - d2 f(t, y(h t), D y(t)).
/// Throws Error(domain) unless t is 0 or on the forward orbit of a or b.
double el_residual(const VariationalProblem& prob, const RealFunction& y, double t);

/// The constant c in the extremal of u + v^2/2 with y(0) = 0, y(1) = beta.
/// Throws Error(horizon) if theta <= 1, Error(non_convergence) if a series
/// stalls.
double example1_constant(const QuantumParams& params, double beta, const SeriesConfig& cfg = {});

/// y(t) = antiderivative of (s -> s + c), the extremal of L[y] = int_0^1 y(h t) + (D y)^2 / 2.
RealFunction example1_extremal(const QuantumParams& params, double beta, const SeriesConfig& cfg = {});

/// The Lagrangian u + v^2/2.
Lagrangian example1_lagrangian();

/// sup |y| + sup |D y| over the points of the interval.
double norm_E(const QuantumParams& params, const RealFunction& y, const LatticeInterval& interval,
              const DiffConfig& diff_cfg = {});

/// Maps a trajectory ybar to y = z(t, ybar(t)).
using Transform = std::function<RealFunction(const RealFunction&)>;
/// Maps a trajectory ybar to s -> G(s, ybar(s)).
using GaugeTerm = std::function<RealFunction(const RealFunction&)>;

/// |f(t, y(h t), D y(t)) - fbar(t, ybar(h t), D ybar(t)) - D[G(., ybar(.))](t)| with y = z(ybar).
double leitmann_residual(const QuantumParams& params, const Lagrangian& f, const Lagrangian& fbar,
                         const GaugeTerm& G, const Transform& z, const RealFunction& ybar, double t,
                         const DiffConfig& diff_cfg = {});

/// f(t, u, v) = (v g(t) + u D g(t))^2, i.e. [D(y g)]^2 along y.
Lagrangian example4_lagrangian(const QuantumParams& params, const RealFunction& g, const DiffConfig& diff_cfg = {});

struct Example4Coefficients {
    double A = 0.0;
    double C = 0.0;
};

/// A = (alpha g(a) - beta g(b)) / (a - b), C = (a beta g(b) - b alpha g(a)) / (a - b).
Example4Coefficients example4_coefficients(double a, double b, double alpha, double beta, const RealFunction& g);

/// ybar -> ybar + (A t + B) / g
Transform example4_transform(double A, double B, const RealFunction& g);

/// ybar -> A (2 ybar g + A t + B)
GaugeTerm example4_gauge(double A, double B, const RealFunction& g);

/// (A t + C) / g(t). Throws Error(domain) naming the first interval point where g vanishes.
RealFunction example4_solution(const LatticeInterval& interval, double alpha, double beta, const RealFunction& g);

} // namespace powerq
