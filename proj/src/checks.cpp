#include "powerq/checks.hpp"

#include "powerq/error.hpp"
#include "powerq/variational.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace powerq {

namespace {

class Tally {
public:
    void observe(double residual)
    {
        ++samples_;
        if (std::isnan(residual)) {
            saw_nan_ = true;
            return;
        }
        max_ = std::max(max_, residual);
    }
    void observe_scaled(double residual, double scale) { observe(residual / scale); }

    double max() const noexcept { return samples_ == 0 ? 0.0 : max_; }
    std::size_t samples() const noexcept { return samples_; }
    bool saw_nan() const noexcept { return saw_nan_; }

private:
    double max_ = -std::numeric_limits<double>::infinity();
    std::size_t samples_ = 0;
    bool saw_nan_ = false;
};

using Body = std::function<void(Tally&)>;

PropertyResult property(std::string name, double threshold, const Body& body)
{
    PropertyResult r;
    r.name = std::move(name);
    r.threshold = threshold;
    Tally tally;
    try {
        body(tally);
        r.max_residual = tally.max();
        r.samples = tally.samples();
        r.passed = !tally.saw_nan() && tally.max() <= threshold;
        if (tally.saw_nan()) {
            r.note = "NaN residual encountered";
        }
    } catch (const Error& e) {
        r.passed = false;
        r.samples = tally.samples();
        r.max_residual = tally.max();
        r.note = std::string(to_string(e.kind())) + ": " + e.what();
    } catch (const std::exception& e) {
        r.passed = false;
        r.note = e.what();
    }
    return r;
}

double sample_radius(const QuantumParams& params)
{
    return std::min(0.95 * params.theta(), 1.5);
}

std::string label(const QuantumParams& params)
{
    std::ostringstream os;
    os << "n=" << params.n() << ",q=" << params.q();
    return os.str();
}

double min_orbit_gap(const QuantumParams& params, double t, int steps)
{
    double gap = std::numeric_limits<double>::infinity();
    double x = t;
    for (int i = 0; i < steps; ++i) {
        const double hx = h_apply(params, x);
        gap = std::min(gap, std::abs(hx - x));
        x = hx;
    }
    return gap;
}

// Points whose first `steps` orbit gaps all exceed min_gap, so nested
// difference quotients of depth `steps` stay well conditioned.
std::vector<double> well_separated_points(const QuantumParams& params, std::mt19937_64& rng, std::size_t count,
                                          int steps, double min_gap)
{
    const double r = sample_radius(params);
    std::uniform_real_distribution<double> pick(-r, r);
    std::vector<double> out;
    for (int attempt = 0; attempt < 200000 && out.size() < count; ++attempt) {
        const double t = pick(rng);
        if (std::abs(t) >= 1e-3 && min_orbit_gap(params, t, steps) >= min_gap) {
            out.push_back(t);
        }
    }
    if (out.size() < count) {
        throw Error(ErrorKind::numeric, "could not sample enough well-separated orbit points for " + label(params));
    }
    return out;
}

std::pair<double, double> random_pair(const QuantumParams& params, std::mt19937_64& rng)
{
    const double r = sample_radius(params);
    std::uniform_real_distribution<double> pick(-r, r);
    const double a = pick(rng);
    const double b = pick(rng);
    return {a, b};
}

// ---------------------------------------------------------------- rules

std::vector<PropertyResult> rules_suite(const CheckOptions& opt)
{
    const auto corpus = check_corpus();
    const auto grid = check_grid();
    std::vector<PropertyResult> out;

    out.push_back(property("rules.power_oracles", 1e-11, [&](Tally& tally) {
        const RealFunction square = RealFunction::parse("t^2");
        const RealFunction reciprocal = RealFunction::parse("1/t");
        std::mt19937_64 rng(opt.seed);
        for (const auto& params : grid) {
            for (double t : sample_lattice_points(params, rng, 200, 1e-3)) {
                const double tn = std::pow(t, params.n());
                const double want_sq = t + params.q() * tn;
                const double want_inv = -1.0 / (params.q() * tn * t);
                tally.observe_scaled(std::abs(d_nq(params, square, t, opt.diff) - want_sq),
                                     std::max(1e-300, std::abs(want_sq)));
                tally.observe_scaled(std::abs(d_nq(params, reciprocal, t, opt.diff) - want_inv), std::abs(want_inv));
            }
        }
    }));

    struct Acc {
        Tally sum, scalar, product1, product2, quotient;
    };
    Acc acc;
    std::string fault;
    try {
        std::mt19937_64 rng(opt.seed + 1);
        for (const auto& params : grid) {
            const auto points = sample_lattice_points(params, rng, 100, 1e-4);
            for (const auto& f : corpus) {
                for (const auto& g : corpus) {
                    for (double t : points) {
                        const RuleResiduals r = rule_residuals(params, f.f, g.f, t, opt.diff);
                        acc.sum.observe_scaled(r.sum, r.scale);
                        acc.scalar.observe_scaled(r.scalar, r.scale);
                        acc.product1.observe_scaled(r.product1, r.scale);
                        acc.product2.observe_scaled(r.product2, r.scale);
                        const double gh = g.f(h_apply(params, t));
                        if (r.quotient && std::min(std::abs(g.f(t)), std::abs(gh)) >= 1e-3) {
                            acc.quotient.observe_scaled(*r.quotient, r.scale);
                        }
                    }
                }
            }
        }
    } catch (const Error& e) {
        fault = std::string(to_string(e.kind())) + ": " + e.what();
    }
    auto from_tally = [&](const char* name, const Tally& t) {
        return property(name, 1e-10, [&](Tally& out_tally) {
            if (!fault.empty()) {
                throw Error(ErrorKind::numeric, fault);
            }
            out_tally = t;
        });
    };
    out.push_back(from_tally("rules.sum", acc.sum));
    out.push_back(from_tally("rules.scalar", acc.scalar));
    out.push_back(from_tally("rules.product_shifted_left", acc.product1));
    out.push_back(from_tally("rules.product_shifted_right", acc.product2));
    out.push_back(from_tally("rules.quotient", acc.quotient));
    return out;
}

// -------------------------------------------------------------- leibniz

double binomial(int m, int k)
{
    double c = 1.0;
    for (int i = 1; i <= k; ++i) {
        c = c * (m - k + i) / i;
    }
    return c;
}

std::vector<PropertyResult> leibniz_suite(const CheckOptions& opt)
{
    std::vector<PropertyResult> out;

    out.push_back(property("leibniz.string_count", 0.0, [&](Tally& tally) {
        for (int m = 0; m <= 8; ++m) {
            for (int k = 0; k <= m; ++k) {
                const auto words = leibniz_strings(m, k);
                double bad = std::abs(static_cast<double>(words.size()) - binomial(m, k));
                for (std::size_t i = 0; i < words.size(); ++i) {
                    const auto& w = words[i];
                    if (w.size() != static_cast<std::size_t>(m) || w.count(Op::H) != static_cast<std::size_t>(k)) {
                        bad += 1.0;
                    }
                    if (i > 0 && !(words[i - 1].to_string() < w.to_string())) {
                        bad += 1.0;
                    }
                }
                tally.observe(bad);
            }
        }
    }));

    const auto corpus = check_corpus();
    const auto grid = check_grid();

    out.push_back(property("leibniz.off_singular", 1e-9, [&](Tally& tally) {
        std::mt19937_64 rng(opt.seed + 2);
        for (const auto& params : grid) {
            for (int m = 1; m <= 4; ++m) {
                const auto points = well_separated_points(params, rng, 4, m, 0.02);
                for (std::size_t i = 0; i < corpus.size(); ++i) {
                    const auto& f = corpus[i].f;
                    const auto& g = corpus[(i * 4 + 3) % corpus.size()].f;
                    for (double t : points) {
                        const LeibnizSides s = leibniz_lhs_rhs(params, f, g, t, m, opt.diff);
                        tally.observe_scaled(std::abs(s.lhs - s.rhs), s.scale);
                    }
                }
            }
        }
    }));

    out.push_back(property("leibniz.on_singular", 1e-9, [&](Tally& tally) {
        for (const auto& params : grid) {
            for (double t : singular_set(params)) {
                for (int m = 1; m <= 4; ++m) {
                    for (const auto& f : corpus) {
                        for (const auto& g : corpus) {
                            const LeibnizSides s = leibniz_lhs_rhs(params, f.f, g.f, t, m, opt.diff);
                            tally.observe_scaled(std::abs(s.lhs - s.rhs), s.scale);
                        }
                    }
                }
            }
        }
    }));
    return out;
}

// ------------------------------------------------------------------ ftc

std::vector<PropertyResult> ftc_suite(const CheckOptions& opt)
{
    const auto corpus = check_corpus();
    const auto grid = check_grid();
    std::vector<PropertyResult> out;

    out.push_back(property("ftc.residual", 1e-8, [&](Tally& tally) {
        std::mt19937_64 rng(opt.seed + 3);
        for (const auto& params : grid) {
            for (int pair = 0; pair < 50; ++pair) {
                const auto [a, b] = random_pair(params, rng);
                for (const auto& f : corpus) {
                    tally.observe(ftc_residual(params, f.f, a, b, opt.series, opt.diff));
                }
            }
        }
    }));

    out.push_back(property("ftc.by_parts", 1e-9, [&](Tally& tally) {
        std::mt19937_64 rng(opt.seed + 3);
        for (const auto& params : grid) {
            for (int pair = 0; pair < 50; ++pair) {
                const auto [a, b] = random_pair(params, rng);
                for (std::size_t i = 0; i < corpus.size(); ++i) {
                    const auto& g = corpus[(i + 1) % corpus.size()].f;
                    tally.observe(by_parts_residual(params, corpus[i].f, g, a, b, opt.series, opt.diff));
                }
            }
        }
    }));

    out.push_back(property("ftc.derivative_of_antiderivative", 1e-8, [&](Tally& tally) {
        std::mt19937_64 rng(opt.seed + 4);
        for (const auto& params : grid) {
            const auto points = sample_lattice_points(params, rng, 20, 1e-2);
            for (const auto& f : corpus) {
                const RealFunction F = antiderivative_function(params, f.f, opt.series);
                for (double t : points) {
                    tally.observe(std::abs(d_nq(params, F, t, opt.diff) - f.f(t)));
                }
            }
        }
    }));
    return out;
}

// -------------------------------------------------------- integral-props

std::vector<PropertyResult> integral_props_suite(const CheckOptions& opt)
{
    const auto corpus = check_corpus();
    const auto grid = check_grid();
    std::vector<PropertyResult> out;
    auto I = [&](const QuantumParams& p, const RealFunction& f, double a, double b) {
        return integral(p, f, a, b, opt.series).value;
    };

    out.push_back(property("integral.empty_interval", 1e-10, [&](Tally& tally) {
        std::mt19937_64 rng(opt.seed + 5);
        for (const auto& params : grid) {
            for (int i = 0; i < 10; ++i) {
                const double a = random_pair(params, rng).first;
                for (const auto& f : corpus) {
                    tally.observe(std::abs(I(params, f.f, a, a)));
                }
            }
        }
    }));

    out.push_back(property("integral.homogeneity", 1e-10, [&](Tally& tally) {
        std::mt19937_64 rng(opt.seed + 6);
        std::uniform_real_distribution<double> coeff(-3.0, 3.0);
        for (const auto& params : grid) {
            for (int i = 0; i < 10; ++i) {
                const auto [a, b] = random_pair(params, rng);
                const double c = coeff(rng);
                for (const auto& f : corpus) {
                    const double lhs = I(params, c * f.f, a, b);
                    const double rhs = c * I(params, f.f, a, b);
                    tally.observe_scaled(std::abs(lhs - rhs), 1.0 + std::abs(lhs) + std::abs(rhs));
                }
            }
        }
    }));

    out.push_back(property("integral.antisymmetry", 1e-10, [&](Tally& tally) {
        std::mt19937_64 rng(opt.seed + 7);
        for (const auto& params : grid) {
            for (int i = 0; i < 10; ++i) {
                const auto [a, b] = random_pair(params, rng);
                for (const auto& f : corpus) {
                    const double ab = I(params, f.f, a, b);
                    const double ba = I(params, f.f, b, a);
                    tally.observe_scaled(std::abs(ab + ba), 1.0 + std::abs(ab) + std::abs(ba));
                }
            }
        }
    }));

    out.push_back(property("integral.additivity_interval", 1e-10, [&](Tally& tally) {
        std::mt19937_64 rng(opt.seed + 8);
        for (const auto& params : grid) {
            for (int i = 0; i < 10; ++i) {
                const auto [x, y] = random_pair(params, rng);
                const double z = random_pair(params, rng).first;
                double pts[3] = {x, y, z};
                std::sort(pts, pts + 3);
                for (const auto& f : corpus) {
                    const double whole = I(params, f.f, pts[0], pts[2]);
                    const double left = I(params, f.f, pts[0], pts[1]);
                    const double right = I(params, f.f, pts[1], pts[2]);
                    tally.observe_scaled(std::abs(whole - left - right),
                                         1.0 + std::abs(whole) + std::abs(left) + std::abs(right));
                }
            }
        }
    }));

    out.push_back(property("integral.additivity_integrand", 1e-10, [&](Tally& tally) {
        std::mt19937_64 rng(opt.seed + 9);
        for (const auto& params : grid) {
            for (int i = 0; i < 10; ++i) {
                const auto [a, b] = random_pair(params, rng);
                for (std::size_t j = 0; j < corpus.size(); ++j) {
                    const auto& f = corpus[j].f;
                    const auto& g = corpus[(j + 2) % corpus.size()].f;
                    const double lhs = I(params, f + g, a, b);
                    const double fi = I(params, f, a, b);
                    const double gi = I(params, g, a, b);
                    tally.observe_scaled(std::abs(lhs - fi - gi), 1.0 + std::abs(lhs) + std::abs(fi) + std::abs(gi));
                }
            }
        }
    }));

    out.push_back(property("integral.short_interval_identity", 1e-10, [&](Tally& tally) {
        std::mt19937_64 rng(opt.seed + 10);
        for (const auto& params : grid) {
            for (double t : sample_lattice_points(params, rng, 10, 1e-3)) {
                for (const auto& f : corpus) {
                    const ShortIntegral s = short_integral_identity(params, f.f, t, opt.series);
                    tally.observe_scaled(std::abs(s.lhs - s.rhs), 1.0 + std::abs(s.lhs) + std::abs(s.rhs));
                }
            }
        }
    }));

    // Bound failures count as residual 1; the threshold 0 then demands none.
    out.push_back(property("integral.monotonicity", 0.0, [&](Tally& tally) {
        std::mt19937_64 rng(opt.seed + 11);
        std::uniform_int_distribution<int> index(0, 4);
        for (const auto& params : grid) {
            for (int i = 0; i < 5; ++i) {
                const double s = random_pair(params, rng).first;
                int k1 = index(rng);
                int k2 = index(rng);
                if (k1 == k2) {
                    ++k2;
                }
                double a = h_iterate(params, s, k1);
                double b = h_iterate(params, s, k2);
                if (a > b) {
                    std::swap(a, b);
                }
                if (a == b) {
                    continue;
                }
                for (const auto& f : corpus) {
                    const RealFunction g([f = f.f](double t) { return std::abs(f(t)); });
                    const RealFunction dominating([f = f.f](double t) { return std::abs(f(t)) + 1.0; });
                    const double fail_tight = monotonicity_check(params, f.f, g, s, a, b, opt.series) ? 0.0 : 1.0;
                    const double fail_loose =
                        monotonicity_check(params, f.f, dominating, s, a, b, opt.series) ? 0.0 : 1.0;
                    tally.observe(fail_tight + fail_loose);
                }
            }
        }
    }));

    out.push_back(property("integral.jackson_closed_form", 1e-10, [&](Tally& tally) {
        for (double q : {0.3, 0.5, 0.9}) {
            const QuantumParams params(1, q);
            tally.observe(std::abs(I(params, RealFunction::identity(), 0.0, 1.0) - 1.0 / (1.0 + q)));
        }
    }));

    out.push_back(property("integral.jackson_termwise", 1e-12, [&](Tally& tally) {
        std::mt19937_64 rng(opt.seed + 12);
        std::uniform_real_distribution<double> pick(-1.5, 1.5);
        for (double q : {0.3, 0.5, 0.9}) {
            const QuantumParams params(1, q);
            for (int depth : {1, 5, 20, 60}) {
                SeriesConfig fixed = opt.series;
                fixed.min_terms = depth;
                fixed.max_terms = depth;
                const double a = pick(rng);
                for (const auto& f : corpus) {
                    double jackson = 0.0;
                    double qk = 1.0;
                    for (int k = 0; k < depth; ++k) {
                        jackson += qk * f.f(a * qk);
                        qk *= q;
                    }
                    jackson *= a * (1.0 - q);
                    const double ours = antiderivative_at(params, f.f, a, fixed).value;
                    tally.observe_scaled(std::abs(ours - jackson), 1.0 + std::abs(jackson));
                }
            }
        }
    }));
    return out;
}

// ------------------------------------------------------- counterexample

std::vector<PropertyResult> counterexample_suite(const CheckOptions& opt)
{
    std::vector<PropertyResult> out;
    const double qs[] = {0.3, 0.5, 0.7};

    out.push_back(property("counterexample.breakpoint_values", 1e-12, [&](Tally& tally) {
        for (double q : qs) {
            const RealFunction f = counterexample_function(q);
            double pm = 1.0;
            for (int m = 1; m <= 5; ++m) {
                pm *= q;
                tally.observe(std::abs(f(pm) + 1.0));
                tally.observe(std::abs(f(pm * (1.0 + q) / 2.0) - 1.0));
            }
        }
    }));

    out.push_back(property("counterexample.signed_integral", 1e-9, [&](Tally& tally) {
        for (double q : qs) {
            const QuantumParams params(1, q);
            const double value = integral(params, counterexample_function(q), (1.0 + q) / 2.0, 1.0, opt.series).value;
            tally.observe(std::abs(value + (3.0 + q) / 2.0));
        }
    }));

    out.push_back(property("counterexample.absolute_integral", 1e-9, [&](Tally& tally) {
        for (double q : qs) {
            const QuantumParams params(1, q);
            const RealFunction f = counterexample_function(q);
            const RealFunction abs_f([f](double x) { return std::abs(f(x)); });
            const double value = integral(params, abs_f, (1.0 + q) / 2.0, 1.0, opt.series).value;
            tally.observe(std::abs(value - (1.0 - q) / 2.0));
        }
    }));

    // Residual is int|f| - |int f|, which must be strictly negative.
    PropertyResult strict = property("counterexample.strict_inequality", 0.0, [&](Tally& tally) {
        for (double q : qs) {
            const QuantumParams params(1, q);
            const RealFunction f = counterexample_function(q);
            const RealFunction abs_f([f](double x) { return std::abs(f(x)); });
            const double a = (1.0 + q) / 2.0;
            const double signed_value = integral(params, f, a, 1.0, opt.series).value;
            const double abs_value = integral(params, abs_f, a, 1.0, opt.series).value;
            tally.observe(abs_value - std::abs(signed_value));
        }
    });
    strict.passed = strict.note.empty() && strict.max_residual < 0.0;
    out.push_back(strict);
    return out;
}

// ---------------------------------------------------------- variational

std::vector<PropertyResult> variational_suite(const CheckOptions& opt)
{
    std::vector<PropertyResult> out;
    const double tol = 1e-6;
    // Quotients at t carry roundoff near eps |f| / |h(t) - t|; identities with
    // absolute thresholds are sampled where that stays well below them.
    const double conditioned_tol = 1e-4;

    out.push_back(property("variational.el_residual", 1e-8, [&](Tally& tally) {
        for (const QuantumParams& params : {QuantumParams(1, 0.5), QuantumParams(1, 0.9), QuantumParams(3, 0.5)}) {
            const double beta = 1.0 / (1.0 + params.q());
            const VariationalProblem prob(params, example1_lagrangian(), 0.0, 1.0, 0.0, beta, opt.series, opt.diff);
            const RealFunction y = example1_extremal(params, beta, opt.series);
            const LatticeInterval lattice(params, 0.0, 1.0, tol);
            for (double t : lattice.points()) {
                tally.observe(std::abs(el_residual(prob, y, t)));
            }
        }
    }));

    out.push_back(property("variational.boundary_values", 1e-8, [&](Tally& tally) {
        for (const QuantumParams& params : {QuantumParams(1, 0.5), QuantumParams(1, 0.9), QuantumParams(3, 0.5)}) {
            const double beta = 1.0 / (1.0 + params.q());
            const RealFunction y = example1_extremal(params, beta, opt.series);
            tally.observe(std::abs(y(0.0)));
            tally.observe(std::abs(y(1.0) - beta));
        }
    }));

    out.push_back(property("variational.closed_form_extremal", 1e-8, [&](Tally& tally) {
        for (double q : {0.5, 0.9}) {
            const QuantumParams params(1, q);
            const RealFunction y = example1_extremal(params, 1.0 / (1.0 + q), opt.series);
            const LatticeInterval lattice(params, 0.0, 1.0, tol);
            for (double t : lattice.points()) {
                if (t > tol) {
                    tally.observe(std::abs(y(t) - t * t / (1.0 + q)));
                }
            }
        }
    }));

    struct Fixture {
        QuantumParams params;
        VariationalProblem prob;
        RealFunction y;
        std::vector<Variation> variations;
    };
    auto fixtures = [&]() {
        std::vector<Fixture> fx;
        std::mt19937_64 rng(opt.seed + 13);
        for (double q : {0.5, 0.9}) {
            const QuantumParams params(1, q);
            const double beta = 1.0 / (1.0 + q);
            Fixture f{params,
                      VariationalProblem(params, example1_lagrangian(), 0.0, 1.0, 0.0, beta, opt.series, opt.diff),
                      example1_extremal(params, beta, opt.series),
                      {}};
            for (int i = 0; i < 10; ++i) {
                f.variations.push_back(random_variation(0.0, 1.0, rng));
            }
            fx.push_back(std::move(f));
        }
        return fx;
    };

    out.push_back(property("variational.first_variation_vanishes", 1e-6, [&](Tally& tally) {
        for (const auto& fx : fixtures()) {
            for (const auto& p : fx.variations) {
                tally.observe(std::abs(first_variation(fx.prob, fx.y, p)));
            }
        }
    }));

    out.push_back(property("variational.first_variation_matches_difference", 1e-6, [&](Tally& tally) {
        for (const auto& fx : fixtures()) {
            for (const auto& p : fx.variations) {
                const double exact = first_variation(fx.prob, fx.y, p);
                const double fd = first_variation_fd(fx.prob, fx.y, p);
                tally.observe_scaled(std::abs(exact - fd), 1.0 + std::abs(exact));
            }
        }
    }));

    // Residual is L[y] - L[y + eps p], at most the comparison slack.
    out.push_back(property("variational.direct_comparison", 1e-12, [&](Tally& tally) {
        for (const auto& fx : fixtures()) {
            const double base = functional_value(fx.prob, fx.y).value;
            for (const auto& p : fx.variations) {
                for (double eps : {0.1, -0.1, 0.01, -0.01}) {
                    const double perturbed = functional_value(fx.prob, fx.y + eps * p.p()).value;
                    tally.observe(std::max(0.0, base - perturbed));
                }
            }
        }
    }));

    const QuantumParams leit(1, 0.5);
    const double alpha = 1.0;
    const double beta = 2.0;
    const std::vector<std::string> weights = {"1", "1 + t^2", "exp(t)"};

    out.push_back(property("variational.leitmann_boundary", 1e-12, [&](Tally& tally) {
        const LatticeInterval lattice(leit, 0.0, 1.0, tol);
        for (const auto& text : weights) {
            const RealFunction g = RealFunction::parse(text);
            const RealFunction y = example4_solution(lattice, alpha, beta, g);
            tally.observe(std::abs(y(0.0) - alpha));
            tally.observe(std::abs(y(1.0) - beta));
        }
    }));

    out.push_back(property("variational.leitmann_identity", 1e-9, [&](Tally& tally) {
        const LatticeInterval lattice(leit, 0.0, 1.0, conditioned_tol);
        for (const auto& text : weights) {
            const RealFunction g = RealFunction::parse(text);
            const Example4Coefficients k = example4_coefficients(0.0, 1.0, alpha, beta, g);
            const double B = k.C - 1.0;
            const Lagrangian f = example4_lagrangian(leit, g, opt.diff);
            const RealFunction ybar = RealFunction::constant(1.0) / g;
            for (double t : lattice.points()) {
                tally.observe(leitmann_residual(leit, f, f, example4_gauge(k.A, B, g), example4_transform(k.A, B, g),
                                                ybar, t, opt.diff));
            }
        }
    }));

    out.push_back(property("variational.leitmann_minimality", 1e-12, [&](Tally& tally) {
        const LatticeInterval lattice(leit, 0.0, 1.0, tol);
        std::mt19937_64 rng(opt.seed + 14);
        for (const auto& text : weights) {
            const RealFunction g = RealFunction::parse(text);
            const RealFunction y = example4_solution(lattice, alpha, beta, g);
            const VariationalProblem prob(leit, example4_lagrangian(leit, g, opt.diff), 0.0, 1.0, alpha, beta,
                                          opt.series, opt.diff);
            const double best = functional_value(prob, y).value;
            for (int i = 0; i < 50; ++i) {
                const Variation p = random_variation(0.0, 1.0, rng);
                tally.observe(std::max(0.0, best - functional_value(prob, y + p.p()).value));
            }
        }
    }));

    out.push_back(property("variational.norm_axioms", 1e-12, [&](Tally& tally) {
        const auto corpus = check_corpus();
        std::mt19937_64 rng(opt.seed + 15);
        std::uniform_int_distribution<std::size_t> index(0, corpus.size() - 1);
        std::uniform_real_distribution<double> coeff(-4.0, 4.0);
        for (const auto& params : check_grid()) {
            const LatticeInterval lattice(params, -0.5, 0.9, conditioned_tol);
            for (int i = 0; i < 10; ++i) {
                const auto& f = corpus[index(rng)].f;
                const auto& g = corpus[index(rng)].f;
                const double c = coeff(rng);
                const double nf = norm_E(params, f, lattice, opt.diff);
                const double ng = norm_E(params, g, lattice, opt.diff);
                const double ncf = norm_E(params, c * f, lattice, opt.diff);
                const double nfg = norm_E(params, f + g, lattice, opt.diff);
                tally.observe_scaled(std::abs(ncf - std::abs(c) * nf), 1.0 + std::abs(ncf));
                tally.observe_scaled(std::max(0.0, nfg - nf - ng), 1.0 + nf + ng);
            }
        }
    }));
    return out;
}

using Suite = std::vector<PropertyResult> (*)(const CheckOptions&);

const std::vector<std::pair<std::string, Suite>>& suites()
{
    static const std::vector<std::pair<std::string, Suite>> table = {
        {"rules", rules_suite},
        {"leibniz", leibniz_suite},
        {"ftc", ftc_suite},
        {"integral-props", integral_props_suite},
        {"counterexample", counterexample_suite},
        {"variational", variational_suite},
    };
    return table;
}

} // namespace

std::vector<NamedFunction> check_corpus()
{
    std::vector<NamedFunction> out;
    for (const char* text : {"1", "t", "t^2 - 3*t + 1", "2*t^3 - t", "t^4 + 0.5*t^2 - 2", "t^5 - 2*t^3 + t + 0.25",
                             "exp(t)", "sin(t)", "1/(1+t^2)"}) {
        out.push_back({text, RealFunction::parse(text)});
    }
    return out;
}

std::vector<QuantumParams> check_grid()
{
    return {QuantumParams(1, 0.5), QuantumParams(3, 0.5), QuantumParams(3, 0.9)};
}

std::vector<double> sample_lattice_points(const QuantumParams& params, std::mt19937_64& rng, std::size_t count,
                                          double min_gap)
{
    const double r = sample_radius(params);
    std::uniform_real_distribution<double> pick(-r, r);
    std::vector<double> out;
    out.reserve(count);
    for (int attempt = 0; attempt < 100000 && out.size() < count; ++attempt) {
        double x = pick(rng);
        for (int k = 0; k < 4 && out.size() < count; ++k) {
            if (std::abs(x) >= 1e-3 && !in_singular_set(params, x, 1e-9) &&
                std::abs(h_apply(params, x) - x) >= min_gap) {
                out.push_back(x);
            }
            x = h_apply(params, x);
        }
    }
    if (out.size() < count) {
        throw Error(ErrorKind::numeric, "could not sample enough lattice points for " + label(params));
    }
    return out;
}

const std::vector<std::string>& check_suite_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, fn] : suites()) {
            v.push_back(name);
        }
        return v;
    }();
    return names;
}

std::vector<PropertyResult> run_check_suite(std::string_view suite, const CheckOptions& options)
{
    std::vector<PropertyResult> out;
    bool matched = false;
    for (const auto& [name, fn] : suites()) {
        if (suite == "all" || suite == name) {
            matched = true;
            auto part = fn(options);
            out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
        }
    }
    if (!matched) {
        throw_domain("unknown check suite '" + std::string(suite) + "'");
    }
    return out;
}

} // namespace powerq
