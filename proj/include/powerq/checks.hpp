#pragma once

#include "powerq/calculus.hpp"
#include "powerq/function.hpp"
#include "powerq/integration.hpp"
#include "powerq/lattice.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace powerq {

/// Outcome of one invariant over its whole sample. Residuals of scaled
/// properties are already divided by their scale.
struct PropertyResult {
    std::string name;
    double max_residual = 0.0;
    double threshold = 0.0;
    bool passed = true;
    std::size_t samples = 0;
    std::string note;
};

struct CheckOptions {
    std::uint64_t seed = 20110917;
    SeriesConfig series;
    DiffConfig diff;
};

struct NamedFunction {
    std::string text;
    RealFunction f;
};

/// Polynomials up to degree 5, exp, sin and 1/(1+t^2).
std::vector<NamedFunction> check_corpus();

/// (n, q) in {(1, 0.5), (3, 0.5), (3, 0.9)}.
std::vector<QuantumParams> check_grid();

/// Orbit samples x with |x| >= 1e-3, |x| <= min(0.95 theta, 1.5), off S and
/// with |h(x) - x| >= min_gap.
std::vector<double> sample_lattice_points(const QuantumParams& params, std::mt19937_64& rng, std::size_t count,
                                          double min_gap);

/// Names accepted by run_check_suite, "all" excluded.
const std::vector<std::string>& check_suite_names();

/// Runs one suite ("all" runs every suite in order). Faults inside a
/// property are reported as a failed result, never thrown.
/// Throws Error(domain) for an unknown suite name.
std::vector<PropertyResult> run_check_suite(std::string_view suite, const CheckOptions& options = {});

} // namespace powerq
