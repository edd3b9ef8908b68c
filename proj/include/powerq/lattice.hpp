#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace powerq {

/// The pair (n, q) that fixes the map h(t) = q t^n. n is odd and positive,
/// q lies strictly inside (0, 1). Immutable once constructed.
class QuantumParams {
public:
    /// Throws Error(domain) when n is even or non-positive, or q is outside (0,1).
    QuantumParams(int n, double q);

    int n() const noexcept { return n_; }
    double q() const noexcept { return q_; }

    /// q^{1/(1-n)}, or +inf when n == 1.
    double theta() const noexcept { return theta_; }

    /// True when |t| < theta (the open interval on which orbits shrink to 0).
    bool inside_horizon(double t) const noexcept;

    friend bool operator==(const QuantumParams&, const QuantumParams&) = default;

private:
    int n_;
    double q_;
    double theta_;
};

double theta(const QuantumParams& params) noexcept;

/// Fixed points of h: {0} for n == 1, {-theta, 0, theta} otherwise.
std::vector<double> singular_set(const QuantumParams& params);

/// 1e-12 * max(1, theta); theta is taken as 1 when n == 1.
double default_singular_atol(const QuantumParams& params) noexcept;

bool in_singular_set(const QuantumParams& params, double t, double atol);
bool in_singular_set(const QuantumParams& params, double t);

/// [k]_n = sum_{i<k} n^i, exact. Throws Error(overflow) if it does not fit.
std::uint64_t bracket_k(std::uint64_t k, std::uint64_t n);

double h_apply(const QuantumParams& params, double t) noexcept;

/// sign(t) * (|t|/q)^{1/n}; well defined for every real t since n is odd.
double h_inverse(const QuantumParams& params, double t) noexcept;

/// k-fold composition of h (k >= 0) or of h^{-1} (k < 0). k == 0 returns t.
double h_iterate(const QuantumParams& params, double t, int k) noexcept;

/// Forward orbit h^0(t), h^1(t), ... , h^count-1(t).
std::vector<double> orbit(const QuantumParams& params, double t, std::size_t count);

enum class LimitKind { diverges_pos, to_zero, diverges_neg, fixed };

std::string_view to_string(LimitKind kind) noexcept;

/// Behaviour of h^k(t) as k grows; membership in S is decided with `atol`.
LimitKind classify_limit(const QuantumParams& params, double t, double atol);
LimitKind classify_limit(const QuantumParams& params, double t);

/// Smallest k with |h^k(s) - x| <= rtol * max(1e-300, |x|), searched over the
/// forward orbit of s while |h^k(s)| does not drop far below |x|.
std::optional<int> forward_orbit_index(const QuantumParams& params, double s, double x,
                                       double rtol = 1e-12, int max_steps = 10000);

/// Finite prefix of [a,b]_{n,q}: the forward orbits of a and b truncated at
/// truncation_tol, with 0 appended. Sorted ascending, deduplicated.
class LatticeInterval {
public:
    static constexpr int max_orbit_steps = 10000;

    /// Throws Error(domain) if a >= b, Error(horizon) if |a| or |b| >= theta.
    LatticeInterval(const QuantumParams& params, double a, double b, double truncation_tol);

    const QuantumParams& params() const noexcept { return params_; }
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double truncation_tol() const noexcept { return truncation_tol_; }
    const std::vector<double>& points() const noexcept { return points_; }

    bool contains(double t, double rtol = 1e-14) const;

private:
    QuantumParams params_;
    double a_;
    double b_;
    double truncation_tol_;
    std::vector<double> points_;
};

LatticeInterval build_interval(const QuantumParams& params, double a, double b, double truncation_tol);

} // namespace powerq
