#include "nabla/extrema.hpp"

#include "nabla/error.hpp"
#include "nabla/format.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace nabla {

namespace {

constexpr int kNeighbourSamples = 64;
constexpr double kNeighbourWidth = 1e-3;
constexpr int kPieceScan = 1024;
constexpr int kBoundaryRefinements = 20;
constexpr double kFlatTol = 1e-12;

void require_member(const TimeScale& ts, double t) {
    if (!ts.contains(t))
        throw DomainError("t=" + format_real(t) + " is not in T=" + ts.describe());
}

void require_endpoints(const TimeScale& ts, double a, double b) {
    require_member(ts, a);
    require_member(ts, b);
    if (!(a < b))
        throw DomainError("need a < b, got a=" + format_real(a) + ", b=" + format_real(b));
}

// Samples s in (t - width, t) approaching t geometrically.
bool neighbourhood_holds(const RealFunction& f, double t, double width, bool want_max) {
    const double ft = f(t);
    for (int i = 1; i <= kNeighbourSamples; ++i) {
        const double s = t - width * std::pow(10.0, -6.0 * i / kNeighbourSamples);
        if (!(s < t))
            break;
        const double fs = f(s);
        if (want_max ? fs > ft : fs < ft)
            return false;
    }
    return true;
}

template <class Better>
double golden(const RealFunction& f, double lo, double hi, Better better) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < 120 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++i) {
        if (better(f1, f2)) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    return 0.5 * (lo + hi);
}

struct Candidate {
    double t;
    bool dense;
};

std::vector<Candidate> interior_candidates(const TimeScale& ts, double a, double b) {
    std::vector<Candidate> out;
    for (const auto& p : ts.clip(a, b).pieces()) {
        if (p.is_point()) {
            if (p.lo > a && p.lo < b)
                out.push_back({p.lo, false});
            continue;
        }
        const double lo = std::max(p.lo, a), hi = std::min(p.hi, b);
        if (p.lo > a && rho(ts, p.lo) < p.lo)
            out.push_back({p.lo, false});
        const double w = (hi - lo) / kPieceScan;
        for (int i = 0; i < kPieceScan; ++i)
            out.push_back({lo + (i + 0.5) * w, true});
        // Witnesses can hide next to the ends of a piece.
        for (int k = 1; k <= kBoundaryRefinements; ++k) {
            const double d = 0.5 * w * std::ldexp(1.0, -k);
            out.push_back({lo + d, true});
            out.push_back({hi - d, true});
        }
    }
    std::sort(out.begin(), out.end(), [](const Candidate& x, const Candidate& y) { return x.t < y.t; });
    out.erase(std::unique(out.begin(), out.end(), [](const Candidate& x, const Candidate& y) { return x.t == y.t; }),
              out.end());
    return out;
}

double quotient(WitnessKind kind, const TimeScale& ts, const RealFunction& f, const RealFunction* g, double t,
                const FracOrder& alpha, const LimitOptions& opts) {
    const double df = nabla(ts, f, t, alpha, opts).value;
    switch (kind) {
    case WitnessKind::Rolle: return df;
    case WitnessKind::Mean:
        if (alpha.is_one())
            return df;
        return df / std::pow(nu(ts, t), 1.0 - alpha.value());
    case WitnessKind::Generalized: {
        const double dg = nabla(ts, *g, t, alpha, opts).value;
        if (!(dg > 0.0))
            throw DomainError("nabla g(t)=" + format_real(dg) + " is not positive at t=" + format_real(t));
        return df / dg;
    }
    }
    return df;
}

std::string kind_name(WitnessKind k) {
    switch (k) {
    case WitnessKind::Rolle: return "rolle";
    case WitnessKind::Mean: return "mvt";
    case WitnessKind::Generalized: return "gmvt";
    }
    return "?";
}

WitnessPair pick_witnesses(WitnessKind kind, const TimeScale& ts, const RealFunction& f, const RealFunction* g,
                           double a, double b, const FracOrder& alpha, const LimitOptions& opts) {
    const auto scan = witness_scan(kind, ts, f, g, a, b, alpha, opts);
    const double tol = kCertifyTol * (1.0 + std::abs(scan.mid));
    const std::size_t n = scan.points.size();
    auto first = [&](auto ok) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < n; ++i)
            if (ok(scan.quotients[i]))
                return i;
        return std::nullopt;
    };
    auto i1 = first([&](double q) { return q <= scan.mid; });
    if (!i1)
        i1 = first([&](double q) { return q <= scan.mid + tol; });
    auto i2 = first([&](double q) { return q >= scan.mid; });
    if (!i2)
        i2 = first([&](double q) { return q >= scan.mid - tol; });
    if (!i1 || !i2) {
        const auto [lo, hi] = std::minmax_element(scan.quotients.begin(), scan.quotients.end());
        const bool any_dense = std::find(scan.dense.begin(), scan.dense.end(), true) != scan.dense.end();
        throw InconclusiveSearch(
            kind_name(kind) + " search found no " + (i1 ? "t2" : "t1") + " in (" + format_real(a) + ", " +
            format_real(b) + ")_T over " + std::to_string(n) + (any_dense ? " sampled" : " interior") +
            " points; mid=" + format_real(scan.mid) + ", best candidates t=" +
            format_real(scan.points[lo - scan.quotients.begin()]) + " (" + format_real(*lo) + "), t=" +
            format_real(scan.points[hi - scan.quotients.begin()]) + " (" + format_real(*hi) + ")");
    }
    WitnessPair out{scan.points[*i1], scan.points[*i2], scan.quotients[*i1], scan.mid, scan.quotients[*i2], alpha};

    // Recompute before handing the pair out.
    const double lhs = quotient(kind, ts, f, g, out.t1, alpha, opts);
    const double rhs = quotient(kind, ts, f, g, out.t2, alpha, opts);
    if (!(lhs <= out.mid + tol && out.mid <= rhs + tol))
        throw InconclusiveSearch(kind_name(kind) + " witnesses failed recertification");
    return out;
}

} // namespace

std::string to_string(ExtremumKind k) {
    switch (k) {
    case ExtremumKind::LeftMax: return "LeftMax";
    case ExtremumKind::LeftMin: return "LeftMin";
    case ExtremumKind::Both: return "LeftMaxAndLeftMin";
    case ExtremumKind::Neither: return "Neither";
    }
    return "?";
}

ExtremumReport local_left_extremum(const TimeScale& ts, const RealFunction& f, double t0, const FracOrder& alpha,
                                   const LimitOptions& opts) {
    require_member(ts, t0);
    if (!tk_contains(ts, t0))
        throw DomainError("t=" + format_real(t0) + " not in T^k (right-scattered minimum)");

    ExtremumReport out;
    try {
        out.derivative = nabla(ts, f, t0, alpha, opts).value;
    } catch (const DomainError&) {
        out.derivative.reset();
    }

    bool is_max = true, is_min = true;
    const double back = rho(ts, t0);
    if (back < t0) {
        is_max = f(back) <= f(t0);
        is_min = f(back) >= f(t0);
    } else {
        out.sampled = true;
        const double reach = ts.dense_reach(t0).first;
        if (reach > 0.0) {
            const double width = std::min(kNeighbourWidth, reach);
            for (double w : {width, width / 16.0}) {
                is_max = is_max && neighbourhood_holds(f, t0, w, true);
                is_min = is_min && neighbourhood_holds(f, t0, w, false);
            }
        }
    }
    out.kind = is_max ? (is_min ? ExtremumKind::Both : ExtremumKind::LeftMax)
                      : (is_min ? ExtremumKind::LeftMin : ExtremumKind::Neither);
    if (out.derivative) {
        const double d = *out.derivative;
        // A dense limit is only known to the limit tolerance.
        const double tol = back < t0 ? kCertifyTol : std::max(kCertifyTol, opts.tolerance * (1.0 + std::abs(d)));
        out.necessary_holds = (!is_max || d >= -tol) && (!is_min || d <= tol);
        out.sufficient_holds = (!(d > tol) || is_max) && (!(d < -tol) || is_min);
    }
    return out;
}

ExtremePoints extreme_values(const TimeScale& ts, const RealFunction& f, double a, double b) {
    require_endpoints(ts, a, b);
    ExtremePoints out{a, a, f(a), f(a)};
    auto offer = [&](double t, double v) {
        if (v < out.min_value || (v == out.min_value && t < out.argmin)) {
            out.argmin = t;
            out.min_value = v;
        }
        if (v > out.max_value || (v == out.max_value && t < out.argmax)) {
            out.argmax = t;
            out.max_value = v;
        }
    };
    for (const auto& p : ts.clip(a, b).pieces()) {
        if (p.is_point()) {
            offer(p.lo, f(p.lo));
            continue;
        }
        std::vector<double> xs(kPieceScan + 1), vs(kPieceScan + 1);
        for (int i = 0; i <= kPieceScan; ++i) {
            xs[i] = i == kPieceScan ? p.hi : p.lo + (p.hi - p.lo) * i / kPieceScan;
            vs[i] = f(xs[i]);
            offer(xs[i], vs[i]);
        }
        const auto lo_it = std::min_element(vs.begin(), vs.end());
        const auto hi_it = std::max_element(vs.begin(), vs.end());
        auto bracket = [&](std::ptrdiff_t i) {
            return std::pair{xs[std::max<std::ptrdiff_t>(i - 1, 0)], xs[std::min<std::ptrdiff_t>(i + 1, kPieceScan)]};
        };
        const auto [l1, r1] = bracket(lo_it - vs.begin());
        const double xmin = golden(f, l1, r1, [](double u, double v) { return u < v; });
        offer(xmin, f(xmin));
        const auto [l2, r2] = bracket(hi_it - vs.begin());
        const double xmax = golden(f, l2, r2, [](double u, double v) { return u > v; });
        offer(xmax, f(xmax));
    }
    return out;
}

WitnessScan witness_scan(WitnessKind kind, const TimeScale& ts, const RealFunction& f, const RealFunction* g,
                         double a, double b, const FracOrder& alpha, const LimitOptions& opts) {
    require_endpoints(ts, a, b);
    if (kind == WitnessKind::Generalized && !g)
        throw DomainError("the generalized mean value search needs g");

    WitnessScan out;
    switch (kind) {
    case WitnessKind::Rolle:
        if (std::abs(f(a) - f(b)) > kFlatTol)
            throw DomainError("Rolle needs f(a) = f(b), got f(a)=" + format_real(f(a)) + ", f(b)=" + format_real(f(b)));
        out.mid = 0.0;
        break;
    case WitnessKind::Mean: out.mid = (f(b) - f(a)) / (b - a); break;
    case WitnessKind::Generalized: {
        const double dg = (*g)(b) - (*g)(a);
        if (dg == 0.0)
            throw DomainError("g(a) = g(b) = " + format_real((*g)(a)));
        out.mid = (f(b) - f(a)) / dg;
        break;
    }
    }

    auto candidates = interior_candidates(ts, a, b);
    if (candidates.empty())
        throw DomainError("(a, b)_T is empty for a=" + format_real(a) + ", b=" + format_real(b));
    if (kind == WitnessKind::Mean && !alpha.is_one()) {
        const auto it = std::find_if(candidates.begin(), candidates.end(), [](const Candidate& c) { return c.dense; });
        const double dense_point = it == candidates.end() ? a : it->t;
        std::erase_if(candidates, [](const Candidate& c) { return c.dense; });
        if (candidates.empty())
            throw DomainError("alpha < 1 needs left-scattered interior points, but t=" + format_real(dense_point) +
                              " is left-dense and none are scattered");
    }
    for (const auto& c : candidates) {
        out.points.push_back(c.t);
        out.dense.push_back(c.dense);
        out.quotients.push_back(quotient(kind, ts, f, g, c.t, alpha, opts));
    }
    return out;
}

WitnessPair rolle_witnesses(const TimeScale& ts, const RealFunction& f, double a, double b, const FracOrder& alpha,
                            const LimitOptions& opts) {
    return pick_witnesses(WitnessKind::Rolle, ts, f, nullptr, a, b, alpha, opts);
}

WitnessPair gmvt_witnesses(const TimeScale& ts, const RealFunction& f, const RealFunction& g, double a, double b,
                           const FracOrder& alpha, const LimitOptions& opts) {
    return pick_witnesses(WitnessKind::Generalized, ts, f, &g, a, b, alpha, opts);
}

WitnessPair mvt_witnesses(const TimeScale& ts, const RealFunction& f, double a, double b, const FracOrder& alpha,
                          const LimitOptions& opts) {
    return pick_witnesses(WitnessKind::Mean, ts, f, nullptr, a, b, alpha, opts);
}

} // namespace nabla
