#include "powerq/lattice.hpp"

#include "powerq/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace powerq {

QuantumParams::QuantumParams(int n, double q) : n_(n), q_(q)
{
    if (n < 1 || n % 2 == 0) {
        throw_domain("n must be an odd positive integer, got " + std::to_string(n));
    }
    if (!(q > 0.0 && q < 1.0)) {
        std::ostringstream os;
        os << "q must lie strictly inside (0,1), got " << q;
        throw_domain(os.str());
    }
    theta_ = n == 1 ? std::numeric_limits<double>::infinity() : std::pow(q, 1.0 / (1.0 - n));
}

bool QuantumParams::inside_horizon(double t) const noexcept
{
    return std::abs(t) < theta_;
}

double theta(const QuantumParams& params) noexcept
{
    return params.theta();
}

std::vector<double> singular_set(const QuantumParams& params)
{
    if (params.n() == 1) {
        return {0.0};
    }
    return {-params.theta(), 0.0, params.theta()};
}

double default_singular_atol(const QuantumParams& params) noexcept
{
    const double th = params.n() == 1 ? 1.0 : params.theta();
    return 1e-12 * std::max(1.0, th);
}

bool in_singular_set(const QuantumParams& params, double t, double atol)
{
    for (double s : singular_set(params)) {
        if (std::abs(t - s) <= atol) {
            return true;
        }
    }
    return false;
}

bool in_singular_set(const QuantumParams& params, double t)
{
    return in_singular_set(params, t, default_singular_atol(params));
}

std::uint64_t bracket_k(std::uint64_t k, std::uint64_t n)
{
    // [k+1]_n = n [k]_n + 1
    std::uint64_t acc = 0;
    for (std::uint64_t i = 0; i < k; ++i) {
        std::uint64_t next = 0;
        if (__builtin_mul_overflow(acc, n, &next) || __builtin_add_overflow(next, 1u, &next)) {
            throw Error(ErrorKind::overflow, "[k]_n overflows 64-bit unsigned for k=" + std::to_string(k) +
                                                 ", n=" + std::to_string(n));
        }
        acc = next;
    }
    return acc;
}

double h_apply(const QuantumParams& params, double t) noexcept
{
    double p = t;
    for (int i = 1; i < params.n(); ++i) {
        p *= t;
    }
    return params.q() * p;
}

double h_inverse(const QuantumParams& params, double t) noexcept
{
    const double r = std::abs(t) / params.q();
    double root = 0.0;
    if (params.n() == 1) {
        root = r;
    } else if (params.n() == 3) {
        root = std::cbrt(r);
    } else {
        root = std::pow(r, 1.0 / params.n());
    }
    return std::copysign(root, t);
}

double h_iterate(const QuantumParams& params, double t, int k) noexcept
{
    double x = t;
    if (k >= 0) {
        for (int i = 0; i < k; ++i) {
            x = h_apply(params, x);
        }
    } else {
        for (int i = 0; i < -k; ++i) {
            x = h_inverse(params, x);
        }
    }
    return x;
}

std::vector<double> orbit(const QuantumParams& params, double t, std::size_t count)
{
    std::vector<double> pts;
    pts.reserve(count);
    double x = t;
    for (std::size_t i = 0; i < count; ++i) {
        pts.push_back(x);
        x = h_apply(params, x);
    }
    return pts;
}

std::string_view to_string(LimitKind kind) noexcept
{
    switch (kind) {
    case LimitKind::diverges_pos: return "diverges_pos";
    case LimitKind::to_zero: return "to_zero";
    case LimitKind::diverges_neg: return "diverges_neg";
    case LimitKind::fixed: return "fixed";
    }
    return "unknown";
}

LimitKind classify_limit(const QuantumParams& params, double t, double atol)
{
    if (in_singular_set(params, t, atol)) {
        return LimitKind::fixed;
    }
    if (t > params.theta()) {
        return LimitKind::diverges_pos;
    }
    if (t < -params.theta()) {
        return LimitKind::diverges_neg;
    }
    return LimitKind::to_zero;
}

LimitKind classify_limit(const QuantumParams& params, double t)
{
    return classify_limit(params, t, default_singular_atol(params));
}

std::optional<int> forward_orbit_index(const QuantumParams& params, double s, double x, double rtol,
                                       int max_steps)
{
    const double scale = std::max(std::abs(x), 1e-300);
    const bool shrinking = params.inside_horizon(s);
    double y = s;
    for (int k = 0; k <= max_steps; ++k) {
        if (std::abs(y - x) <= rtol * scale) {
            return k;
        }
        if (!std::isfinite(y) || (y == 0.0 && x != 0.0)) {
            break;
        }
        if (shrinking && std::abs(y) < 0.5 * std::abs(x)) {
            break;
        }
        y = h_apply(params, y);
    }
    return std::nullopt;
}

namespace {

void append_orbit(const QuantumParams& params, double start, double tol, std::vector<double>& out)
{
    double x = start;
    for (int k = 0; k < LatticeInterval::max_orbit_steps; ++k) {
        if (std::abs(x) < tol || x == 0.0) {
            break;
        }
        out.push_back(x);
        x = h_apply(params, x);
    }
}

} // namespace

LatticeInterval::LatticeInterval(const QuantumParams& params, double a, double b, double truncation_tol)
    : params_(params), a_(a), b_(b), truncation_tol_(truncation_tol)
{
    if (!(a < b)) {
        throw_domain("lattice interval requires a < b");
    }
    if (!(truncation_tol >= 0.0)) {
        throw_domain("truncation tolerance must be nonnegative");
    }
    if (!params.inside_horizon(a) || !params.inside_horizon(b)) {
        std::ostringstream os;
        os << "endpoints must lie inside (-theta, theta) with theta=" << params.theta();
        throw Error(ErrorKind::horizon, os.str(), params.inside_horizon(a) ? b : a);
    }

    std::vector<double> pts;
    append_orbit(params, a, truncation_tol, pts);
    append_orbit(params, b, truncation_tol, pts);
    pts.push_back(0.0);
    std::sort(pts.begin(), pts.end());

    for (double p : pts) {
        if (!points_.empty() && std::abs(p - points_.back()) <= 1e-14 * std::max(1.0, std::abs(p))) {
            continue;
        }
        points_.push_back(p);
    }
}

bool LatticeInterval::contains(double t, double rtol) const
{
    auto it = std::lower_bound(points_.begin(), points_.end(), t);
    const double tolerance = rtol * std::max(1.0, std::abs(t));
    if (it != points_.end() && std::abs(*it - t) <= tolerance) {
        return true;
    }
    return it != points_.begin() && std::abs(*std::prev(it) - t) <= tolerance;
}

LatticeInterval build_interval(const QuantumParams& params, double a, double b, double truncation_tol)
{
    return LatticeInterval(params, a, b, truncation_tol);
}

} // namespace powerq
