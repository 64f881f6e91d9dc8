// Acceptance criteria runner. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails. argv[1] is the path of the nabla
// executable used by criterion 9.

#include "oracles.hpp"

#include "nabla/chain.hpp"
#include "nabla/error.hpp"
#include "nabla/extrema.hpp"
#include "nabla/series.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace nabla;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int n, const std::string& title, const std::function<Outcome()>& body) {
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("unexpected error: ") + e.what()};
    }
    if (!o.pass)
        ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n << ": " << title << " (" << o.detail << ")"
              << std::endl;
}

std::string num(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

const FracOrder kOne = classify_alpha(1, 1);

// Tolerances and budgets.
constexpr double kCbrtTol = 1e-6;
constexpr double kCbrtSeconds = 1.0;
constexpr double kChainTol = 1e-10;
constexpr double kOrdinaryRelTol = 1e-6;
constexpr int kOrdinaryPoints = 200;
constexpr double kOrdinarySeconds = 5.0;
constexpr double kShiftTol = 1e-12;
constexpr int kShiftCases = 1000;
constexpr int kRolleScales = 500;
constexpr double kRolleSeconds = 30.0;
constexpr int kSuiteMinCases = 300;
constexpr double kSuiteSeconds = 120.0;
constexpr double kZeroTol = 1e-9;

Outcome odd_root() {
    const auto start = Clock::now();
    const auto r = nabla::nabla(TimeScale::interval(-1, 1), parse_function("cbrt(t)"), 0, classify_alpha(1, 3));
    const double secs = seconds_since(start);
    const bool ok = std::abs(r.value - 1) <= kCbrtTol && secs < kCbrtSeconds;
    return {ok, "value " + num(r.value) + ", method " + to_string(r.method) + ", " + num(secs) + " s"};
}

Outcome gmvt_example() {
    const auto f = parse_function("2*t+3"), g = parse_function("t^2");
    std::vector<double> pts;
    for (int k = 1; k <= 10; ++k)
        pts.push_back(k);
    const Rational mid = Rational(f(10) - f(1)) / Rational(g(10) - g(1));
    // Exhaustive scan in exact arithmetic: on N the quotient is 2 / (2t - 1).
    std::vector<double> t1, t2;
    for (int t = 2; t <= 9; ++t) {
        const Rational q = Rational(2) / Rational(2 * t - 1);
        if (q <= mid)
            t1.push_back(t);
        if (q >= mid)
            t2.push_back(t);
    }
    const auto w = gmvt_witnesses(TimeScale::naturals(), f, g, 1, 10, kOne);
    const bool ok = mid == Rational(18, 99) && t1 == std::vector<double>{6, 7, 8, 9} &&
                    t2 == std::vector<double>{2, 3, 4, 5, 6} && w.t1 == 6 && w.t2 == 2 &&
                    w.mid == static_cast<double>(mid);
    return {ok, "t1 set size " + std::to_string(t1.size()) + ", t2 set size " + std::to_string(t2.size()) +
                    ", pair (" + num(w.t1) + ", " + num(w.t2) + "), mid " + num(w.mid)};
}

Outcome chain_regression() {
    const auto z2 = TimeScale::multiples(2);
    const auto f = parse_function("t^2"), g = parse_function("sqrt(2)*t");
    double worst_integral = 0, worst_c = 0, closest_naive = INFINITY;
    for (int t = -4; t <= 6; t += 2) {
        worst_integral = std::max(worst_integral, std::abs(chain_integral(z2, f, g, t, kOne) - 2.0 * (2 * t - 2)));
        closest_naive = std::min(closest_naive, std::abs(naive_chain(z2, f, g, t, kOne) - 2.0 * (2 * t - 2)));
        worst_c = std::max(worst_c, std::abs(chain_c_point(z2, f, g, t, kOne).c - (t - 1)));
    }
    const bool ok = worst_integral <= kChainTol && worst_c <= kChainTol && closest_naive > kChainTol;
    return {ok, "max integral error " + num(worst_integral) + ", max c error " + num(worst_c) +
                    ", min naive gap " + num(closest_naive)};
}

Outcome power_sums() {
    const auto z = TimeScale::integers();
    const auto f = parse_function("t^2");
    int checked = 0, bad = 0;
    for (int t = -5; t <= 10; ++t)
        for (unsigned m = 1; m <= 6; ++m) {
            const Rational tr = t;
            Rational hi = 1, lo = 1;
            for (unsigned i = 0; i < 2 * m + 2; ++i) {
                hi *= tr;
                lo *= tr - 1;
            }
            const Rational closed = (hi - lo) / (2 * tr - 1);
            const auto ps = power_sum(z, f, t, kOne, m);
            const auto bf = power_sum_bruteforce(z, f, t, m);
            ++checked;
            if (!ps.exact || !bf.exact || *ps.exact != *bf.exact || *ps.exact != closed)
                ++bad;
        }
    return {bad == 0, std::to_string(checked) + " exact comparisons, " + std::to_string(bad) + " mismatches"};
}

Outcome cube_sums() {
    const auto n = TimeScale::naturals();
    const auto f = parse_function("t^3");
    int bad = 0;
    for (int t = 2; t <= 50; ++t) {
        const auto e = backward_expansion(n, f, t, 1, kOne);
        // The term at j is j^3 - (j-1)^3 = 3j(j-1) + 1, so the sum of (term - 1) / 3 is sum j(j-1).
        Rational reindexed = 0, direct = 0;
        for (double term : e.terms)
            reindexed += (Rational(term) - 1) / 3;
        for (int j = 2; j <= t; ++j)
            direct += Rational(j) * (j - 1);
        const Rational closed = (Rational(t) * t * t - t) / 3;
        if (reindexed != direct || direct != closed || e.value != static_cast<double>(t) * t * t)
            ++bad;
    }
    return {bad == 0, "t = 2..50, " + std::to_string(bad) + " mismatches"};
}

Outcome ordinary_reduction() {
    const char* fns[] = {"t^2",           "t^5 - 3*t",          "sqrt(t)",          "cbrt(t)",
                         "abs(t)",        "exp(t)",             "ln(t)",            "sin(t)",
                         "cos(t)",        "1/t",                "t^(1/3)",          "t^-2",
                         "exp(sin(t))*ln(t^2+1)", "sqrt(abs(t)) + cos(2*t)/(t^2+2)", "pi*t^3 - 2.5*t + 1"};
    const auto ts = TimeScale::interval(-10, 10);
    oracle::Rng rng(606);
    const auto start = Clock::now();
    int done = 0, bad = 0;
    double worst = 0;
    for (int i = 0; done < kOrdinaryPoints; ++i) {
        const auto f = parse_function(fns[i % std::size(fns)]);
        const double x = rng.uniform(-4, 4);
        double exact = 0;
        try {
            if (f.body().singularity_margin(x) < 0.05)
                continue;
            (void)f(x);
            exact = eval_derivative(f, x);
        } catch (const EvalError&) {
            continue;
        }
        const double d = nabla::nabla(ts, f, x, kOne).value;
        const double err = std::abs(d - exact) / (1 + std::abs(exact));
        worst = std::max(worst, err);
        if (err > kOrdinaryRelTol)
            ++bad;
        ++done;
    }
    const double secs = seconds_since(start);
    return {bad == 0 && secs < kOrdinarySeconds, std::to_string(done) + " points, max scaled error " + num(worst) +
                                                     ", " + num(secs) + " s"};
}

Outcome shift_identity() {
    const char* scales[] = {"Z", "N", "hZ:0.5", "hZ:0.25", "hZ:2", "interval:-3:3",
                            "union:(point:-4;interval:-3:-1;point:0;point:0.5;interval:1:3)",
                            "finite:-3.5,-2,-1.25,0,0.5,1,2.75,3.5"};
    const char* fns[] = {"t^3 - 2*t + 1", "sin(t)", "exp(t/2)", "1/(t^2 + 1)", "sqrt(t + 5)",
                         "ln(t + 6)", "cos(3*t)*t", "2*t^4 - t^2"};
    const FracOrder alphas[] = {kOne, classify_alpha(1, 2), classify_alpha(1, 3), classify_alpha(2, 3),
                                classify_alpha(1, 5)};
    oracle::Rng rng(707);
    int done = 0, bad = 0;
    double worst = 0;
    while (done < kShiftCases) {
        const auto ts = parse_timescale(scales[rng.integer(0, std::size(scales) - 1)]);
        const auto f = parse_function(fns[rng.integer(0, std::size(fns) - 1)]);
        const auto alpha = alphas[rng.integer(0, std::size(alphas) - 1)];
        const double t = ts.nearest(rng.uniform(-3.5, 3.5));
        if (!tk_contains(ts, t))
            continue;
        double r = 0;
        try {
            r = shift_residual(ts, f, t, alpha);
        } catch (const DomainError&) {
            continue; // dense endpoint without approach points
        }
        worst = std::max(worst, std::abs(r));
        if (!(std::abs(r) <= kShiftTol))
            ++bad;
        ++done;
    }
    return {bad == 0, std::to_string(done) + " cases, max residual " + num(worst)};
}

Outcome rolle_completeness() {
    oracle::Rng rng(808);
    const auto start = Clock::now();
    int failed = 0, confirmed_absent = 0, bad_cert = 0;
    std::string first;
    for (int i = 0; i < kRolleScales; ++i) {
        std::vector<double> pts;
        while (pts.size() < 3) {
            pts.clear();
            for (int k = 0, n = static_cast<int>(rng.integer(3, 12)); k < n; ++k)
                pts.push_back(static_cast<double>(rng.integer(-20, 20)) / 2.0);
            std::sort(pts.begin(), pts.end());
            pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        }
        const auto ts = TimeScale::finite(pts);
        const auto ia = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(pts.size()) - 3));
        const auto ib = static_cast<std::size_t>(
            rng.integer(static_cast<std::int64_t>(ia) + 2, static_cast<std::int64_t>(pts.size()) - 1));
        const double a = pts[ia], b = pts[ib];
        const std::string text = "(t - (" + num(a) + "))*(t - (" + num(b) + "))*(" +
                                 std::to_string(rng.integer(-3, 3)) + "*t + " + std::to_string(rng.integer(-3, 3)) +
                                 ")";
        const auto f = parse_function(text);
        try {
            const auto w = rolle_witnesses(ts, f, a, b, kOne);
            const double d1 = f(w.t1) - f(oracle::rho_scan(pts, w.t1));
            const double d2 = f(w.t2) - f(oracle::rho_scan(pts, w.t2));
            if (!(w.lhs <= 0 && w.rhs >= 0 && d1 <= 0 && d2 >= 0))
                ++bad_cert;
        } catch (const InconclusiveSearch&) {
            ++failed;
            const auto sets = oracle::witness_sets(
                pts, a, b, [&](double t) { return oracle::quotient([&](double x) { return f(x); }, t,
                                                                    oracle::rho_scan(pts, t), 1); },
                0);
            if (sets.t1.empty() || sets.t2.empty())
                ++confirmed_absent;
            if (first.empty())
                first = "f=" + text + " on [" + num(a) + ", " + num(b) + "]";
        }
    }
    const double secs = seconds_since(start);
    std::string detail = std::to_string(kRolleScales) + " scales, search failed on " + std::to_string(failed) +
                         ", exhaustive scan finds no witness in " + std::to_string(confirmed_absent) + " of those, " +
                         std::to_string(bad_cert) + " bad certificates, " + num(secs) + " s";
    if (!first.empty())
        detail += "; first: " + first;
    return {failed == 0 && bad_cert == 0 && secs < kRolleSeconds, detail};
}

Outcome verify_all(const std::string& exe) {
    if (exe.empty())
        return {false, "no nabla executable given"};
    const auto start = Clock::now();
    FILE* pipe = popen(("\"" + exe + "\" verify --suite all 2>/dev/null").c_str(), "r");
    if (!pipe)
        return {false, "cannot start " + exe};
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe))
        out.append(buf, n);
    const int status = pclose(pipe);
    const double secs = seconds_since(start);
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    const auto doc = nlohmann::json::parse(out);
    bool enough = true;
    std::string counts;
    for (const auto& s : doc["result"]["suites"]) {
        enough = enough && s["cases"].get<int>() >= kSuiteMinCases && s["failed"].get<int>() == 0;
        counts += " " + s["name"].get<std::string>() + "=" + std::to_string(s["passed"].get<int>()) + "/" +
                  std::to_string(s["cases"].get<int>());
    }
    return {code == 0 && enough && doc["result"]["suites"].size() == 4 && secs < kSuiteSeconds,
            "exit " + std::to_string(code) + "," + counts + ", " + num(secs) + " s"};
}

Outcome converse_failure() {
    const auto rep = local_left_extremum(TimeScale::interval(0, 2), parse_function("2-t"), 1, classify_alpha(1, 3));
    const bool zero = rep.derivative && std::abs(*rep.derivative) <= kZeroTol;
    return {zero && rep.kind == ExtremumKind::Neither,
            "derivative " + (rep.derivative ? num(*rep.derivative) : std::string("none")) + ", kind " +
                to_string(rep.kind) + ", expected Neither"};
}

} // namespace

int main(int argc, char** argv) {
    const std::string exe = argc > 1 ? argv[1] : "";
    report(1, "odd-root derivative", odd_root);
    report(2, "generalized mean value example", gmvt_example);
    report(3, "chain-rule regression on 2Z", chain_regression);
    report(4, "power-sum identity", power_sums);
    report(5, "cube-sum expansion", cube_sums);
    report(6, "ordinary-calculus reduction", ordinary_reduction);
    report(7, "shift identity", shift_identity);
    report(8, "Rolle witness completeness on finite scales", rolle_completeness);
    report(9, "property suites", [&] { return verify_all(exe); });
    report(10, "converse-failure regression", converse_failure);
    if (failures)
        std::cout << failures << " criteria failed" << std::endl;
    return failures ? 1 : 0;
}
