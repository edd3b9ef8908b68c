#pragma once

#include "powerq/function.hpp"
#include "powerq/lattice.hpp"

#include <optional>
#include <string>
#include <vector>

namespace powerq {

/// Floating-point realisation of the two-branch D_{n,q} definition.
struct DiffConfig {
    /// Membership tolerance for S, scaled by max(1, theta) when n > 1.
    double singular_atol = 1e-12;
    /// Below this |q t^n - t| the difference quotient is replaced by f'(t).
    double degenerate_gap = 1e-9;
    /// Central-difference step is fd_step_scale * max(1, |t|).
    double fd_step_scale = 1e-6;

    /// Throws Error(domain) if a field is non-positive or degenerate_gap < 10 eps.
    void validate() const;
};

/// True if d_nq at t takes the classical branch (t in S, or the gap is degenerate).
bool uses_classical_branch(const QuantumParams& params, double t, const DiffConfig& cfg = {});

/// f'(t): symbolic when f carries a derivative, central difference otherwise.
double classical_derivative(const RealFunction& f, double t, const DiffConfig& cfg = {});

/// f^{(m)}(t), differentiating symbolically as far as f allows and finishing
/// with nested central differences.
double classical_derivative_m(const RealFunction& f, double t, int m, const DiffConfig& cfg = {});

/// D_{n,q} f(t) = (f(q t^n) - f(t)) / (q t^n - t), or f'(t) on S.
/// Throws Error(numeric) with location t when the quotient is not finite.
double d_nq(const QuantumParams& params, const RealFunction& f, double t, const DiffConfig& cfg = {});

/// D^m f(t), evaluated over the orbit table {D^j f(h^i t) : i + j <= m}.
/// On S this is the classical m-th derivative f^{(m)}(t).
double d_nq_m(const QuantumParams& params, const RealFunction& f, double t, int m, const DiffConfig& cfg = {});

/// The function s -> D_{n,q} f(s).
RealFunction d_nq_function(const QuantumParams& params, const RealFunction& f, const DiffConfig& cfg = {});

/// The function s -> f(h(s)).
RealFunction precompose_h(const QuantumParams& params, const RealFunction& f);

struct RuleResiduals {
    double sum = 0.0;
    double scalar = 0.0;
    double product1 = 0.0; ///< D(fg) = Df g + f(h) Dg
    double product2 = 0.0; ///< D(fg) = f Dg + Df g(h)
    std::optional<double> quotient; ///< absent when g(t) g(h t) == 0
    double scale = 1.0;    ///< 1 + largest magnitude among the terms involved
};

/// |LHS - RHS| of the sum, scalar, product and quotient rules at t.
RuleResiduals rule_residuals(const QuantumParams& params, const RealFunction& f, const RealFunction& g, double t,
                             const DiffConfig& cfg = {}, double scalar = 3.0);

enum class Op : char { D = 'D', H = 'H' };

/// A word over {D, H}. Applied right to left: H replaces u by u o h and D
/// replaces u by D_{n,q} u.
class OpString {
public:
    OpString() = default;
    explicit OpString(std::vector<Op> ops) : ops_(std::move(ops)) {}
    /// Throws Error(domain) on characters other than 'D' and 'H'.
    static OpString from_string(std::string_view text);

    const std::vector<Op>& ops() const noexcept { return ops_; }
    std::size_t size() const noexcept { return ops_.size(); }
    std::size_t count(Op op) const noexcept;
    std::string to_string() const;

    friend auto operator<=>(const OpString&, const OpString&) = default;

private:
    std::vector<Op> ops_;
};

/// All C(m,k) words of length m with exactly k H symbols, in lexicographic order.
std::vector<OpString> leibniz_strings(int m, int k);

double apply_op_string(const QuantumParams& params, const OpString& s, const RealFunction& f, double t,
                       const DiffConfig& cfg = {});

struct LeibnizSides {
    double lhs = 0.0;
    double rhs = 0.0;
    double scale = 1.0; ///< 1 + sum of |terms| on the right
};

/// Both sides of the quantum Leibniz formula for D^m(fg)(t): the operator
/// string form off S, the binomial form on S.
LeibnizSides leibniz_lhs_rhs(const QuantumParams& params, const RealFunction& f, const RealFunction& g, double t,
                             int m, const DiffConfig& cfg = {});

/// A point c between q t^n and t with f'(g(c)) Dg(t) = D(f o g)(t) within tol.
/// Throws Error(domain) for t in S, Error(witness_not_located) if no bracket is found.
double chain_rule_witness(const QuantumParams& params, const RealFunction& f_outer, const RealFunction& g_inner,
                          double t, double tol, const DiffConfig& cfg = {});

} // namespace powerq
