#include "cli.hpp"

#include "powerq/powerq.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <ostream>

namespace powerq::cli {

namespace {

using json = nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    int n = 1;
    double q = 0.5;
    std::string f;
    std::string g = "1";
    std::string lagrangian;
    std::optional<double> a, b, at, alpha, beta, tol;
    std::optional<int> max_terms;
    int points = 0;
    std::string format;
    std::uint64_t seed = CheckOptions{}.seed;
    int order = 1;
    bool emit_lattice = false;
    std::string suite;
};

std::string number(double x)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string cell(const json& v)
{
    if (v.is_number_float()) {
        return number(v.get<double>());
    }
    if (v.is_string()) {
        return v.get<std::string>();
    }
    return v.dump();
}

void write_csv_rows(std::ostream& out, const json& rows)
{
    if (rows.empty()) {
        return;
    }
    bool first = true;
    for (const auto& [key, value] : rows.front().items()) {
        out << (first ? "" : ",") << key;
        first = false;
    }
    out << '\n';
    for (const auto& row : rows) {
        first = true;
        for (const auto& [key, value] : row.items()) {
            out << (first ? "" : ",") << cell(value);
            first = false;
        }
        out << '\n';
    }
}

void emit(std::ostream& out, const json& report, bool csv, const char* rows_key = nullptr)
{
    if (!csv) {
        out << report.dump() << '\n';
        return;
    }
    if (rows_key != nullptr && report.contains(rows_key)) {
        write_csv_rows(out, report.at(rows_key));
        return;
    }
    json flat = json::object();
    for (const auto& [key, value] : report.items()) {
        if (!value.is_structured()) {
            flat[key] = value;
        }
    }
    write_csv_rows(out, json::array({flat}));
}

double require(const std::optional<double>& v, const char* flag)
{
    if (!v) {
        throw UsageError(std::string("missing required option ") + flag);
    }
    return *v;
}

SeriesConfig series_config(const Options& o)
{
    SeriesConfig cfg;
    if (const char* env = std::getenv("POWERQ_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end == env || *end != '\0') {
            throw UsageError(std::string("POWERQ_TOL is not a number: '") + env + "'");
        }
        cfg.rel_tol = v;
    }
    if (o.tol) {
        cfg.rel_tol = *o.tol;
    }
    if (o.max_terms) {
        cfg.max_terms = *o.max_terms;
        cfg.min_terms = std::min(cfg.min_terms, cfg.max_terms);
    }
    cfg.validate();
    return cfg;
}

json error_object(std::string_view kind, const std::string& message)
{
    return {{"error_kind", kind}, {"message", message}};
}

int not_converged(std::ostream& err, const std::string& what)
{
    err << error_object("non_convergence", what + " did not converge within the term limit").dump() << '\n';
    return numeric;
}

std::vector<double> capped(std::vector<double> pts, int points)
{
    if (points > 0 && static_cast<std::size_t>(points) < pts.size()) {
        pts.resize(static_cast<std::size_t>(points));
    }
    return pts;
}

int cmd_derive(const Options& o, std::ostream& out)
{
    const QuantumParams params(o.n, o.q);
    const RealFunction f = RealFunction::parse(o.f);
    const double t = require(o.at, "--at");
    const double value = (o.order == 1) ? d_nq(params, f, t) : d_nq_m(params, f, t, o.order);
    const json report = {{"t", t}, {"order", o.order}, {"value", value},
                         {"classical_branch", uses_classical_branch(params, t)}};
    emit(out, report, o.format == "csv");
    return ok;
}

int cmd_integrate(const Options& o, std::ostream& out, std::ostream& err)
{
    const QuantumParams params(o.n, o.q);
    const RealFunction f = RealFunction::parse(o.f);
    const IntegralResult r = integral(params, f, require(o.a, "--a"), require(o.b, "--b"), series_config(o));
    const json report = {{"value", r.value}, {"converged", r.converged}, {"terms_used", r.terms_used},
                         {"last_term", r.last_term}};
    emit(out, report, o.format == "csv");
    return r.converged ? ok : not_converged(err, "integral");
}

int cmd_ftc(const Options& o, std::ostream& out, std::ostream& err)
{
    const QuantumParams params(o.n, o.q);
    const RealFunction f = RealFunction::parse(o.f);
    const double a = require(o.a, "--a");
    const double b = require(o.b, "--b");
    const IntegralResult r = integral(params, d_nq_function(params, f), a, b, series_config(o));
    const double rhs = f(b) - f(a);
    const json report = {{"integral_of_derivative", r.value}, {"difference", rhs},
                         {"residual", std::abs(r.value - rhs)}, {"converged", r.converged},
                         {"terms_used", r.terms_used}};
    emit(out, report, o.format == "csv");
    return r.converged ? ok : not_converged(err, "integral of the derivative");
}

int cmd_lattice(const Options& o, std::ostream& out)
{
    const QuantumParams params(o.n, o.q);
    const LatticeInterval lattice(params, require(o.a, "--a"), require(o.b, "--b"), o.tol.value_or(1e-6));
    json rows = json::array();
    for (double t : capped(lattice.points(), o.points)) {
        rows.push_back({{"t", t}});
    }
    const json report = {{"count", rows.size()}, {"lattice_points", rows}};
    emit(out, report, o.format != "json", "lattice_points");
    return ok;
}

int cmd_euler_lagrange(const Options& o, std::ostream& out)
{
    const QuantumParams params(o.n, o.q);
    const RealFunction y = RealFunction::parse(o.f);
    const double a = require(o.a, "--a");
    const double b = require(o.b, "--b");
    const VariationalProblem prob(params, Lagrangian::parse(o.lagrangian), a, b, o.alpha.value_or(y(a)),
                                  o.beta.value_or(y(b)), series_config(o));
    std::vector<double> pts;
    if (o.at) {
        pts.push_back(*o.at);
    } else {
        pts = capped(LatticeInterval(params, a, b, 1e-6).points(), o.points);
    }
    json rows = json::array();
    double worst = 0.0;
    for (double t : pts) {
        const double r = el_residual(prob, y, t);
        worst = std::max(worst, std::abs(r));
        rows.push_back({{"t", t}, {"residual", r}});
    }
    const json report = {{"max_abs_residual", worst}, {"residuals", rows}};
    emit(out, report, o.format == "csv", "residuals");
    return ok;
}

int cmd_extremal(const Options& o, std::ostream& out)
{
    const QuantumParams params(o.n, o.q);
    const SeriesConfig cfg = series_config(o);
    const double beta = require(o.beta, "--beta");
    const double c = example1_constant(params, beta, cfg);
    const RealFunction y = example1_extremal(params, beta, cfg);
    json report = {{"beta", beta}, {"c", c}, {"y0", y(0.0)}, {"y1", y(1.0)}};
    const bool csv = o.format == "csv" || (o.format.empty() && o.emit_lattice);
    if (o.emit_lattice || csv) {
        json rows = json::array();
        for (double t : capped(LatticeInterval(params, 0.0, 1.0, o.tol.value_or(1e-6)).points(), o.points)) {
            rows.push_back({{"t", t}, {"y", y(t)}});
        }
        report["lattice_points"] = rows;
    }
    emit(out, report, csv, "lattice_points");
    return ok;
}

int cmd_leitmann(const Options& o, std::ostream& out, std::ostream& err)
{
    const QuantumParams params(o.n, o.q);
    const RealFunction g = RealFunction::parse(o.g);
    const double a = o.a.value_or(0.0);
    const double b = o.b.value_or(1.0);
    const double alpha = require(o.alpha, "--alpha");
    const double beta = require(o.beta, "--beta");
    const LatticeInterval lattice(params, a, b, 1e-6);
    const RealFunction y = example4_solution(lattice, alpha, beta, g);
    const Example4Coefficients k = example4_coefficients(a, b, alpha, beta, g);

    const Lagrangian f = example4_lagrangian(params, g);
    const double B = k.C - 1.0;
    const RealFunction ybar = RealFunction::constant(1.0) / g;
    double worst = 0.0;
    for (double t : lattice.points()) {
        worst = std::max(worst,
                         leitmann_residual(params, f, f, example4_gauge(k.A, B, g), example4_transform(k.A, B, g), ybar, t));
    }
    const VariationalProblem prob(params, f, a, b, alpha, beta, series_config(o));
    const IntegralResult value = functional_value(prob, y);
    const json report = {{"A", k.A},
                         {"C", k.C},
                         {"y_a", y(a)},
                         {"y_b", y(b)},
                         {"functional_value", value.value},
                         {"converged", value.converged},
                         {"max_identity_residual", worst},
                         {"lattice_size", lattice.points().size()}};
    emit(out, report, o.format == "csv");
    return value.converged ? ok : not_converged(err, "functional value");
}

int cmd_check(const Options& o, std::ostream& out, std::ostream& err)
{
    CheckOptions opt;
    opt.seed = o.seed;
    opt.series = series_config(o);
    const std::vector<PropertyResult> results = run_check_suite(o.suite, opt);

    json rows = json::array();
    std::string failed;
    for (const auto& r : results) {
        json row = {{"name", r.name}, {"passed", r.passed}, {"max_residual", r.max_residual},
                    {"threshold", r.threshold}, {"samples", r.samples}};
        if (!r.note.empty()) {
            row["note"] = r.note;
        }
        rows.push_back(row);
        if (!r.passed) {
            failed += (failed.empty() ? "" : ", ") + r.name;
        }
    }
    const json report = {{"suite", o.suite}, {"passed", failed.empty()}, {"properties", rows}};
    emit(out, report, o.format == "csv", "properties");
    if (!failed.empty()) {
        err << error_object("check_failed", "failing properties: " + failed).dump() << '\n';
        return check_failed;
    }
    return ok;
}

int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::domain:
    case ErrorKind::horizon:
    case ErrorKind::overflow:
        return validation;
    case ErrorKind::syntax:
    case ErrorKind::unknown_identifier:
    case ErrorKind::unbound_variable:
    case ErrorKind::eval_domain:
        return expression;
    case ErrorKind::numeric:
    case ErrorKind::witness_not_located:
    case ErrorKind::non_convergence:
        return numeric;
    }
    return numeric;
}

void add_common(CLI::App* sub, Options& o)
{
    sub->add_option("--n", o.n, "odd positive exponent of h(t) = q t^n")->capture_default_str();
    sub->add_option("--q", o.q, "scale of h, strictly between 0 and 1")->capture_default_str();
    sub->add_option("--tol", o.tol, "series relative tolerance (truncation tolerance for lattice)");
    sub->add_option("--max-terms", o.max_terms, "series term cap");
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}));
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Power quantum calculus: D_{n,q} derivatives, integrals and variational problems"};
    app.require_subcommand(1);

    auto* derive = app.add_subcommand("derive", "n,q-derivative (or its m-th iterate) at a point");
    add_common(derive, o);
    derive->add_option("--f", o.f, "function of t")->required();
    derive->add_option("--at", o.at, "evaluation point")->required();
    derive->add_option("--order", o.order, "iterate order m >= 0")->check(CLI::NonNegativeNumber);

    auto* integrate = app.add_subcommand("integrate", "definite n,q-integral from a to b");
    add_common(integrate, o);
    integrate->add_option("--f", o.f, "integrand in t")->required();
    integrate->add_option("--a", o.a)->required();
    integrate->add_option("--b", o.b)->required();

    auto* ftc = app.add_subcommand("ftc", "fundamental theorem residual for f on [a, b]");
    add_common(ftc, o);
    ftc->add_option("--f", o.f)->required();
    ftc->add_option("--a", o.a)->required();
    ftc->add_option("--b", o.b)->required();

    auto* lattice = app.add_subcommand("lattice", "points of [a, b]_{n,q} (CSV by default)");
    add_common(lattice, o);
    lattice->add_option("--a", o.a)->required();
    lattice->add_option("--b", o.b)->required();
    lattice->add_option("--points", o.points, "emit at most this many points (0 = all)");

    auto* el = app.add_subcommand("euler-lagrange", "Euler-Lagrange residual of trajectory --f");
    add_common(el, o);
    el->add_option("--lagrangian", o.lagrangian, "f(t, u, v)")->required();
    el->add_option("--f", o.f, "trajectory y(t)")->required();
    el->add_option("--a", o.a)->required();
    el->add_option("--b", o.b)->required();
    el->add_option("--alpha", o.alpha);
    el->add_option("--beta", o.beta);
    el->add_option("--at", o.at, "single lattice point instead of the whole lattice");
    el->add_option("--points", o.points, "evaluate at most this many lattice points (0 = all)");

    auto* extremal = app.add_subcommand("extremal", "extremal of int_0^1 y(qt^n) + (Dy)^2/2 with y(0)=0, y(1)=beta");
    add_common(extremal, o);
    extremal->add_option("--beta", o.beta)->required();
    extremal->add_flag("--emit-lattice", o.emit_lattice, "emit (t, y) rows over [0,1]_{n,q}");
    extremal->add_option("--points", o.points, "emit at most this many rows (0 = all)");

    auto* leitmann = app.add_subcommand("leitmann", "minimiser of int [D(y g)]^2 by the direct method");
    add_common(leitmann, o);
    leitmann->add_option("--g", o.g, "nonvanishing weight g(t)")->capture_default_str();
    leitmann->add_option("--a", o.a, "left end (default 0)");
    leitmann->add_option("--b", o.b, "right end (default 1)");
    leitmann->add_option("--alpha", o.alpha)->required();
    leitmann->add_option("--beta", o.beta)->required();

    auto* check = app.add_subcommand("check", "run an invariant suite");
    add_common(check, o);
    std::vector<std::string> suite_choices = check_suite_names();
    suite_choices.push_back("all");
    check->add_option("suite", o.suite)->required()->check(CLI::IsMember(suite_choices));
    check->add_option("--seed", o.seed)->capture_default_str();

    try {
        std::vector<const char*> argv;
        argv.reserve(args.size());
        for (const auto& a : args) {
            argv.push_back(a.c_str());
        }
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << error_object("usage", e.what()).dump() << '\n';
        return validation;
    }

    try {
        if (*derive) {
            return cmd_derive(o, out);
        }
        if (*integrate) {
            return cmd_integrate(o, out, err);
        }
        if (*ftc) {
            return cmd_ftc(o, out, err);
        }
        if (*lattice) {
            return cmd_lattice(o, out);
        }
        if (*el) {
            return cmd_euler_lagrange(o, out);
        }
        if (*extremal) {
            return cmd_extremal(o, out);
        }
        if (*leitmann) {
            return cmd_leitmann(o, out, err);
        }
        return cmd_check(o, out, err);
    } catch (const SyntaxError& e) {
        json obj = error_object(to_string(e.kind()), e.what());
        obj["offset"] = e.offset();
        obj["expected"] = e.expected();
        err << obj.dump() << '\n';
        return expression;
    } catch (const Error& e) {
        json obj = error_object(to_string(e.kind()), e.what());
        if (e.location()) {
            obj["location"] = *e.location();
        }
        err << obj.dump() << '\n';
        return exit_code_for(e.kind());
    } catch (const UsageError& e) {
        err << error_object("usage", e.what()).dump() << '\n';
        return validation;
    } catch (const std::exception& e) {
        err << error_object("numeric", e.what()).dump() << '\n';
        return numeric;
    }
}

} // namespace powerq::cli
