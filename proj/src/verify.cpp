#include "nabla/verify.hpp"

#include "nabla/chain.hpp"
#include "nabla/error.hpp"
#include "nabla/extrema.hpp"
#include "nabla/format.hpp"
#include "nabla/fracdiff.hpp"
#include "nabla/series.hpp"
#include "nabla/timescale.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>

namespace nabla {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t case_seed(std::uint64_t seed, const std::string& suite, int index) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : suite) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return splitmix64(splitmix64(seed ^ h) + static_cast<std::uint64_t>(index));
}

// Draws are defined bit-for-bit here rather than through <random>
// distributions, whose output differs between standard libraries.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double unit() { return static_cast<double>(rng_() >> 11) * 0x1p-53; }
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    bool coin() { return (rng_() >> 63) != 0; }
    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(integer(0, static_cast<std::int64_t>(v.size()) - 1))];
    }

private:
    std::mt19937_64 rng_;
};

std::string poly_text(Gen& gen, int max_degree, int bound) {
    const auto degree = gen.integer(0, max_degree);
    std::string out;
    for (auto k = degree; k >= 0; --k) {
        auto c = gen.integer(-bound, bound);
        if (k == degree && c == 0)
            c = 1;
        if (!out.empty())
            out += " + ";
        out += "(" + std::to_string(c) + ")";
        if (k >= 1)
            out += "*t";
        if (k >= 2)
            out += "^" + std::to_string(k);
    }
    return out;
}

std::string finite_text(Gen& gen, int min_points, int max_points) {
    const auto n = gen.integer(min_points, max_points);
    std::set<std::int64_t> ks;
    while (static_cast<std::int64_t>(ks.size()) < n)
        ks.insert(gen.integer(-16, 16));
    std::string out = "finite:";
    for (auto k : ks)
        out += (out.size() > 7 ? "," : "") + format_real(0.5 * static_cast<double>(k));
    return out;
}

std::string union_text(Gen& gen) {
    return "union:(point:" + format_real(-3.0 - 0.5 * static_cast<double>(gen.integer(0, 2))) +
           ";interval:-2:" + format_real(0.5 * static_cast<double>(gen.integer(1, 3))) +
           ";point:2;point:2.5;interval:3:4)";
}

std::string scale_text(Gen& gen, bool allow_dense) {
    switch (gen.integer(0, allow_dense ? 7 : 5)) {
    case 0: return "Z";
    case 1: return "N";
    case 2: return "hZ:0.5";
    case 3: return "hZ:0.25";
    case 4: return "hZ:2";
    case 5: return finite_text(gen, 4, 12);
    case 6: return "interval:-2:3";
    default: return union_text(gen);
    }
}

FracOrder pick_alpha(Gen& gen, bool odd_only) {
    static const std::vector<FracOrder> all = {classify_alpha(1, 1), classify_alpha(1, 2), classify_alpha(1, 3),
                                               classify_alpha(2, 3), classify_alpha(1, 5)};
    static const std::vector<FracOrder> chain = {classify_alpha(1, 1), classify_alpha(1, 2), classify_alpha(1, 3)};
    return gen.pick(odd_only ? chain : all);
}

// A point of T^k: left-scattered, or well inside an interval piece.
std::optional<double> pick_point(Gen& gen, const TimeScale& ts, bool scattered_only) {
    if (const auto* g = std::get_if<UniformGrid>(&ts.repr())) {
        const std::int64_t lo = g->lo ? *g->lo + 1 : -10;
        return g->at(gen.integer(lo, lo + 19));
    }
    const auto pieces = ts.pieces();
    std::vector<double> scattered;
    std::vector<Piece> dense;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (i > 0)
            scattered.push_back(pieces[i].lo);
        if (!pieces[i].is_point())
            dense.push_back(pieces[i]);
    }
    if (scattered_only || dense.empty() || (!scattered.empty() && gen.coin())) {
        if (scattered.empty())
            return std::nullopt;
        return gen.pick(scattered);
    }
    const Piece& p = gen.pick(dense);
    return p.lo + (p.hi - p.lo) * (0.1 + 0.8 * gen.unit());
}

bool close(double x, double y, double rel) {
    return std::abs(x - y) <= rel * (1.0 + std::max(std::abs(x), std::abs(y)));
}

std::string pair_text(double x, double y) { return format_real(x) + " vs " + format_real(y); }

using Failure = std::optional<std::string>;
using CaseFn = std::function<Failure(Gen&, std::string&, SuiteReport&, const LimitOptions&)>;

SuiteReport run_cases(const std::string& name, const VerifyOptions& opts, const CaseFn& fn) {
    SuiteReport report;
    report.name = name;
    report.seed = opts.seed;
    report.cases = opts.cases;
    for (int i = 0; i < opts.cases; ++i) {
        Gen gen(case_seed(opts.seed, name, i));
        std::string context;
        Failure failure;
        try {
            failure = fn(gen, context, report, opts.limits);
        } catch (const std::exception& e) {
            failure = std::string("unexpected error: ") + e.what();
        }
        if (!failure) {
            ++report.passed;
            continue;
        }
        ++report.failed;
        if (!report.first_counterexample)
            report.first_counterexample = "case " + std::to_string(i) + " [" + context + "]: " + *failure;
    }
    return report;
}

Failure fracdiff_case(Gen& gen, std::string& ctx, SuiteReport&, const LimitOptions& lim) {
    const std::string ts_text = scale_text(gen, true);
    const TimeScale ts = parse_timescale(ts_text);
    const FracOrder alpha = pick_alpha(gen, false);
    const double t = *pick_point(gen, ts, false);
    const std::string f_text = poly_text(gen, 3, 4), g_text = poly_text(gen, 2, 3);
    const auto lam = gen.integer(-3, 3), om = gen.integer(-3, 3);
    ctx = "ts=" + ts_text + " f=" + f_text + " g=" + g_text + " t=" + format_real(t) + " alpha=" + alpha.to_string();
    const RealFunction f = parse_function(f_text), g = parse_function(g_text);
    const bool dense = rho(ts, t) == t;
    const double tol = dense ? 1e-6 : 1e-9;

    if (const double r = shift_residual(ts, f, t, alpha, lim); std::abs(r) > 1e-12)
        return "shift residual " + format_real(r);

    const RealFunction combo = parse_function("(" + std::to_string(lam) + ")*(" + f_text + ") + (" +
                                              std::to_string(om) + ")*(" + g_text + ")");
    const double direct = nabla(ts, combo, t, alpha, lim).value;
    const double via = linear_combo(ts, f, g, static_cast<double>(lam), static_cast<double>(om), t, alpha, lim);
    if (!close(direct, via, tol))
        return "linearity " + pair_text(direct, via);

    const RealFunction prod = parse_function("(" + f_text + ")*(" + g_text + ")");
    const double pd = nabla(ts, prod, t, alpha, lim).value;
    const double pr = product_nabla(ts, f, g, t, alpha, lim);
    if (!close(pd, pr, tol))
        return "product rule " + pair_text(pd, pr);

    if (dense && alpha.is_one()) {
        const double exact = f.derivative().eval(t);
        const double d = nabla(ts, f, t, alpha, lim).value;
        if (!close(d, exact, 1e-6))
            return "ordinary derivative " + pair_text(d, exact);
    }

    const auto rep = local_left_extremum(ts, f, t, alpha, lim);
    if (!rep.necessary_holds || !rep.sufficient_holds)
        return "extremum sign implications fail: " + to_string(rep.kind) + " with derivative " +
               format_real(rep.derivative.value_or(NAN));
    return std::nullopt;
}

// Independent quotient on a finite scale, straight from the definition.
double oracle_quotient(WitnessKind kind, const std::vector<double>& pts, std::size_t i, const RealFunction& f,
                       const RealFunction* g, const FracOrder& alpha) {
    const double t = pts[i], back = pts[i - 1];
    const double jump = std::pow(t - back, alpha.value());
    const double df = (f(t) - f(back)) / jump;
    if (kind == WitnessKind::Generalized)
        return df / (((*g)(t) - (*g)(back)) / jump);
    if (kind == WitnessKind::Mean && !alpha.is_one())
        return df / std::pow(t - back, 1.0 - alpha.value());
    return df;
}

Failure mvt_case(Gen& gen, std::string& ctx, SuiteReport& report, const LimitOptions& lim) {
    const std::string ts_text = finite_text(gen, 4, 12);
    const TimeScale ts = parse_timescale(ts_text);
    const auto pts = ts.points();
    const auto ia = static_cast<std::size_t>(gen.integer(0, static_cast<std::int64_t>(pts.size()) - 3));
    const auto ib = static_cast<std::size_t>(gen.integer(static_cast<std::int64_t>(ia) + 2,
                                                         static_cast<std::int64_t>(pts.size()) - 1));
    const double a = pts[ia], b = pts[ib];
    const FracOrder alpha = pick_alpha(gen, false);
    const auto kind = static_cast<WitnessKind>(gen.integer(0, 2));
    std::string f_text, g_text;
    if (kind == WitnessKind::Rolle)
        f_text = "(t - (" + format_real(a) + "))*(t - (" + format_real(b) + "))*(" + poly_text(gen, 1, 3) +
                 ") + (" + std::to_string(gen.integer(-3, 3)) + ")";
    else
        f_text = poly_text(gen, 3, 3);
    if (kind == WitnessKind::Generalized)
        g_text = gen.pick(std::vector<std::string>{"t", "t + 0.5*t^3", "2*t + 1", "t^3 + t"});
    ctx = "ts=" + ts_text + " a=" + format_real(a) + " b=" + format_real(b) + " f=" + f_text +
          (g_text.empty() ? "" : " g=" + g_text) + " alpha=" + alpha.to_string();
    const RealFunction f = parse_function(f_text);
    const std::optional<RealFunction> g = g_text.empty() ? std::nullopt : std::optional(parse_function(g_text));

    double mid = 0.0;
    if (kind == WitnessKind::Mean)
        mid = (f(b) - f(a)) / (b - a);
    else if (kind == WitnessKind::Generalized)
        mid = (f(b) - f(a)) / ((*g)(b) - (*g)(a));
    const double tol = kCertifyTol * (1.0 + std::abs(mid));
    std::map<double, double> oracle;
    for (std::size_t i = ia + 1; i < ib; ++i)
        oracle[pts[i]] = oracle_quotient(kind, pts, i, f, g ? &*g : nullptr, alpha);
    // Rounding differs between the two computations, so only points beyond
    // the certification band are taken as clear witnesses.
    std::optional<double> clear1, clear2;
    bool any1 = false, any2 = false;
    for (const auto& [p, q] : oracle) {
        any1 = any1 || q <= mid + tol;
        any2 = any2 || q >= mid - tol;
        if (!clear1 && q <= mid - tol)
            clear1 = p;
        if (!clear2 && q >= mid + tol)
            clear2 = p;
    }

    std::optional<WitnessPair> found;
    try {
        if (kind == WitnessKind::Rolle)
            found = rolle_witnesses(ts, f, a, b, alpha);
        else if (kind == WitnessKind::Mean)
            found = mvt_witnesses(ts, f, a, b, alpha);
        else
            found = gmvt_witnesses(ts, f, *g, a, b, alpha);
    } catch (const InconclusiveSearch&) {
    }

    const bool exists = any1 && any2;
    if (exists != found.has_value())
        return std::string("search ") + (found ? "found" : "missed") + " witnesses the exhaustive oracle " +
               (exists ? "has" : "lacks");
    if (!found) {
        if (std::count_if(report.diagnostics.begin(), report.diagnostics.end(),
                          [](const std::string& s) { return s.rfind("no interior witness", 0) == 0; }) < 3)
            report.diagnostics.push_back("no interior witness exists for " + ctx);
        return std::nullopt;
    }
    if (!oracle.count(found->t1) || !oracle.count(found->t2))
        return "witness outside (a, b)_T";
    if (oracle[found->t1] > mid + tol || oracle[found->t2] < mid - tol)
        return "oracle rejects witnesses (" + format_real(found->t1) + ", " + format_real(found->t2) + ")";
    if ((clear1 && found->t1 > *clear1) || (clear2 && found->t2 > *clear2))
        return "witnesses (" + format_real(found->t1) + ", " + format_real(found->t2) +
               ") are not the smallest";
    if (!(found->lhs <= found->mid + tol && found->mid <= found->rhs + tol))
        return "certificate chain broken";

    // Extremum sign implications at an interior point.
    const double t0 = pts[ia + 1];
    const auto rep = local_left_extremum(ts, f, t0, alpha, lim);
    if (!rep.necessary_holds || !rep.sufficient_holds)
        return "extremum sign implications fail at t=" + format_real(t0);
    return std::nullopt;
}

Failure chain_case(Gen& gen, std::string& ctx, SuiteReport&, const LimitOptions& lim) {
    const std::string ts_text = scale_text(gen, true);
    const TimeScale ts = parse_timescale(ts_text);
    const FracOrder alpha = pick_alpha(gen, true);
    const double t = *pick_point(gen, ts, false);
    const std::string f_text = poly_text(gen, 3, 3);
    const std::string g_text =
        gen.pick(std::vector<std::string>{"2*t + 1", "0.5*t - 1", "t^3 + t", "t + 0.25*t^3", "exp(t/4)", "3*t"});
    ctx = "ts=" + ts_text + " f=" + f_text + " g=" + g_text + " t=" + format_real(t) + " alpha=" + alpha.to_string();
    const RealFunction f = parse_function(f_text), g = parse_function(g_text);
    const RealFunction fg = compose(f, g);
    const bool dense = rho(ts, t) == t;
    const double back = rho(ts, t);

    const double direct = nabla(ts, fg, t, alpha, lim).value;
    const double integral = chain_integral(ts, f, g, t, alpha, lim);
    if (!close(integral, direct, 1e-8))
        return "integral chain rule " + pair_text(integral, direct);

    const auto cert = chain_c_point(ts, f, g, t, alpha, lim);
    if (!(cert.c >= back && cert.c <= t) || cert.residual > 1e-8 * (1.0 + std::abs(cert.lhs)) ||
        (dense && cert.c != t))
        return "chain point c=" + format_real(cert.c) + " residual " + format_real(cert.residual);

    const TimeScale image =
        image_timescale(ts, g, Window{std::min(back, t - 1.0), std::max(sigma(ts, t), t + 1.0)});
    const double rho_image = rho(image, g(t));
    if (std::abs(rho_image - g(back)) > 1e-12 * (1.0 + std::abs(g(back))))
        return "rho commutation " + pair_text(rho_image, g(back));

    const double composed = compose_monotone(ts, g, f, t, alpha, lim);
    if (!close(composed, direct, dense ? 1e-6 : 1e-9))
        return "monotone composition " + pair_text(composed, direct);

    const FracOrder one = classify_alpha(1, 1);
    const double inv = inverse_nabla(ts, g, g(t), one, lim);
    const double dg = nabla(ts, g, t, one, lim).value;
    if (std::abs(inv * dg - 1.0) > (dense ? 1e-6 : 1e-9))
        return "inverse rule product " + format_real(inv * dg);
    return std::nullopt;
}

Failure series_case(Gen& gen, std::string& ctx, SuiteReport&, const LimitOptions& lim) {
    switch (gen.integer(0, 3)) {
    case 0: {
        const std::string ts_text = scale_text(gen, false);
        const TimeScale ts = parse_timescale(ts_text);
        const FracOrder alpha = pick_alpha(gen, false);
        const double t = *pick_point(gen, ts, true);
        const auto m = gen.integer(2, 4);
        std::vector<RealFunction> fs;
        ctx = "product ts=" + ts_text + " t=" + format_real(t) + " alpha=" + alpha.to_string() + " fs=";
        for (std::int64_t i = 0; i < m; ++i) {
            const auto text = poly_text(gen, 2, 3);
            ctx += (i ? "; " : "") + text;
            fs.push_back(parse_function(text));
        }
        const double via = general_product_rule(ts, fs, t, alpha, lim);
        const double direct = nabla(ts, product_function(fs), t, alpha, lim).value;
        if (!close(via, direct, 1e-9))
            return "general product rule " + pair_text(via, direct);
        if (m == 2 && via != product_nabla(ts, fs[0], fs[1], t, alpha, lim))
            return "two-factor product rule differs from the pairwise rule";
        return std::nullopt;
    }
    case 1: {
        const TimeScale ts = TimeScale::integers();
        const double t = static_cast<double>(gen.integer(-20, 20));
        const auto m = static_cast<unsigned>(gen.integer(1, 8));
        const std::string f_text = poly_text(gen, 3, 4);
        ctx = "powersum ts=Z t=" + format_real(t) + " m=" + std::to_string(m) + " f=" + f_text;
        const RealFunction f = parse_function(f_text);
        const FracOrder one = classify_alpha(1, 1);
        if (f(t) == f(t - 1.0)) {
            try {
                power_sum(ts, f, t, one, m, lim);
            } catch (const DomainError&) {
                return std::nullopt;
            }
            return std::string("degenerate jump accepted");
        }
        const auto closed = power_sum(ts, f, t, one, m, lim);
        const auto brute = power_sum_bruteforce(ts, f, t, m);
        if (!closed.exact || !brute.exact || *closed.exact != *brute.exact)
            return "exact power sums differ " + pair_text(closed.value, brute.value);
        if (!close(closed.value, brute.value, 1e-9))
            return "power sums differ " + pair_text(closed.value, brute.value);
        return std::nullopt;
    }
    case 2: {
        const TimeScale ts = TimeScale::multiples(0.5);
        const double t = 0.5 * static_cast<double>(gen.integer(-8, 8));
        const auto m = static_cast<unsigned>(gen.integer(1, 5));
        const FracOrder alpha = pick_alpha(gen, false);
        const std::string f_text = gen.pick(std::vector<std::string>{"exp(t/5)", "sin(t) + 2", "sqrt(t^2 + 1)"});
        ctx = "powersum ts=hZ:0.5 t=" + format_real(t) + " m=" + std::to_string(m) + " f=" + f_text +
              " alpha=" + alpha.to_string();
        const RealFunction f = parse_function(f_text);
        const auto closed = power_sum(ts, f, t, alpha, m, lim);
        const auto brute = power_sum_bruteforce(ts, f, t, m);
        if (!close(closed.value, brute.value, 1e-9))
            return "power sums differ " + pair_text(closed.value, brute.value);
        return std::nullopt;
    }
    default: {
        const std::string ts_text = finite_text(gen, 3, 12);
        const TimeScale ts = parse_timescale(ts_text);
        const auto pts = ts.points();
        const auto it = gen.integer(1, static_cast<std::int64_t>(pts.size()) - 1);
        const auto ir = gen.integer(0, it - 1);
        const FracOrder alpha = pick_alpha(gen, false);
        const std::string f_text = poly_text(gen, 3, 4);
        const double t = pts[static_cast<std::size_t>(it)], r = pts[static_cast<std::size_t>(ir)];
        ctx = "expand ts=" + ts_text + " t=" + format_real(t) + " r=" + format_real(r) + " f=" + f_text +
              " alpha=" + alpha.to_string();
        const RealFunction f = parse_function(f_text);
        const auto e = backward_expansion(ts, f, t, r, alpha, lim);
        if (std::abs(e.value - f(t)) > 1e-12 * (1.0 + std::abs(f(t))))
            return "expansion " + pair_text(e.value, f(t));
        if (e.terms.size() != static_cast<std::size_t>(it - ir))
            return "expansion used " + std::to_string(e.terms.size()) + " steps";
        return std::nullopt;
    }
    }
}

} // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"fracdiff", "mvt", "chain", "series"};
    return names;
}

SuiteReport run_suite(const std::string& name, const VerifyOptions& opts) {
    if (opts.cases < 0)
        throw DomainError("case count must be nonnegative");
    if (name == "fracdiff")
        return run_cases(name, opts, fracdiff_case);
    if (name == "mvt")
        return run_cases(name, opts, mvt_case);
    if (name == "chain")
        return run_cases(name, opts, chain_case);
    if (name == "series")
        return run_cases(name, opts, series_case);
    throw DomainError("unknown suite '" + name + "'");
}

std::vector<SuiteReport> run_suites(const std::string& which, const VerifyOptions& opts) {
    std::vector<SuiteReport> out;
    if (which == "all") {
        for (const auto& name : suite_names())
            out.push_back(run_suite(name, opts));
    } else {
        out.push_back(run_suite(which, opts));
    }
    return out;
}

} // namespace nabla
