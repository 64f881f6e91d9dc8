#include "nabla/chain.hpp"

#include "nabla/error.hpp"
#include "nabla/format.hpp"
#include "nabla/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace nabla {

namespace {

constexpr int kScanIntervals = 256;
constexpr int kMaxBisections = 200;
constexpr int kIncreaseSamples = 200;
constexpr std::size_t kMaxImagePoints = 1'000'000;

const FracOrder& order_one() {
    static const FracOrder one = classify_alpha(1, 1);
    return one;
}

double fprime(const RealFunction& f, double x) { return f.derivative().eval(x); }

// Affine functions have a t-free derivative.
std::optional<double> affine_slope(const RealFunction& g) {
    if (!g.body().depends_on_t() || g.derivative().depends_on_t())
        return std::nullopt;
    return g.derivative().eval(0.0);
}

// Window of the source scale that keeps rho(t) and one unit on each side.
Window local_window(const TimeScale& ts, double t) {
    return {std::min(rho(ts, t), t - 1.0), std::max(sigma(ts, t), t + 1.0)};
}

// Intersection with a window; grids stay grids.
TimeScale windowed(const TimeScale& ts, const Window& w) {
    if (const auto* g = std::get_if<UniformGrid>(&ts.repr())) {
        auto lo = static_cast<std::int64_t>(std::ceil((w.lo - g->offset) / g->step - kMembershipTol));
        auto hi = static_cast<std::int64_t>(std::floor((w.hi - g->offset) / g->step + kMembershipTol));
        if (g->lo)
            lo = std::max(lo, *g->lo);
        if (g->hi)
            hi = std::min(hi, *g->hi);
        if (lo > hi)
            throw DomainError("window [" + format_real(w.lo) + ", " + format_real(w.hi) + "] misses T=" +
                              ts.describe());
        return TimeScale::grid(g->offset, g->step, lo, hi);
    }
    return ts.clip(w.lo, w.hi);
}

std::vector<double> thin(std::vector<double> xs, std::size_t keep) {
    if (xs.size() <= keep)
        return xs;
    std::vector<double> out;
    out.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i)
        out.push_back(xs[i * (xs.size() - 1) / (keep - 1)]);
    return out;
}

std::vector<double> increase_samples(const TimeScale& src) {
    const std::size_t keep = kIncreaseSamples + 1;
    if (const auto* g = std::get_if<UniformGrid>(&src.repr()); g && !(g->lo && g->hi)) {
        std::int64_t first = -kIncreaseSamples / 2;
        if (g->lo)
            first = *g->lo;
        else if (g->hi)
            first = *g->hi - kIncreaseSamples;
        std::vector<double> xs;
        for (std::int64_t k = first; k <= first + kIncreaseSamples; ++k)
            xs.push_back(g->at(k));
        return xs;
    }
    if (const auto* g = std::get_if<UniformGrid>(&src.repr())) {
        std::vector<double> xs;
        const std::int64_t n = *g->hi - *g->lo;
        for (std::size_t i = 0; i < keep; ++i) {
            const std::int64_t k = *g->lo + static_cast<std::int64_t>(i) * n / static_cast<std::int64_t>(keep - 1);
            if (xs.empty() || g->at(k) != xs.back())
                xs.push_back(g->at(k));
        }
        return xs;
    }
    std::vector<double> xs;
    for (const auto& p : src.pieces()) {
        if (p.is_point()) {
            xs.push_back(p.lo);
            continue;
        }
        for (std::size_t i = 0; i < keep; ++i)
            xs.push_back(p.lo + (p.hi - p.lo) * static_cast<double>(i) / static_cast<double>(keep - 1));
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return thin(std::move(xs), keep);
}

Piece map_piece(const Piece& p, const RealFunction& g) {
    if (p.is_point()) {
        const double v = g(p.lo);
        return {v, v};
    }
    return {g(p.lo), g(p.hi)};
}

} // namespace

double chain_integral(const TimeScale& ts, const RealFunction& f, const RealFunction& g, double t,
                      const FracOrder& alpha, const LimitOptions& opts) {
    const double dg = nabla(ts, g, t, alpha, opts).value;
    const double back = rho(ts, t);
    const double base = g(back);
    const double step = back < t ? signed_power(t - back, alpha) * dg : 0.0;
    if (step == 0.0)
        return fprime(f, base) * dg;
    const auto degree = f.derivative().polynomial_degree();
    const bool exact_rule = degree && *degree <= 63;
    const auto integral =
        integrate_unit([&](double phi) { return fprime(f, base + phi * step); }, exact_rule);
    return integral.value * dg;
}

double naive_chain(const TimeScale& ts, const RealFunction& f, const RealFunction& g, double t,
                   const FracOrder& alpha, const LimitOptions& opts) {
    return fprime(f, g(t)) * nabla(ts, g, t, alpha, opts).value;
}

ChainPointCert chain_c_point(const TimeScale& ts, const RealFunction& f, const RealFunction& g, double t,
                             const FracOrder& alpha, const LimitOptions& opts) {
    const double dg = nabla(ts, g, t, alpha, opts).value;
    const double lhs = nabla(ts, compose(f, g), t, alpha, opts).value;
    const double tol = 1e-8 * (1.0 + std::abs(lhs));
    auto cert = [&](double c) {
        const double rhs = fprime(f, g(c)) * dg;
        return ChainPointCert{c, lhs, rhs, std::abs(lhs - rhs)};
    };

    const double back = rho(ts, t);
    if (back == t) {
        auto out = cert(t);
        if (out.residual > tol)
            throw InconclusiveSearch("chain point at left-dense t=" + format_real(t) + " has residual " +
                                     format_real(out.residual));
        return out;
    }
    if (dg == 0.0)
        return cert(back);

    auto h = [&](double c) {
        try {
            return fprime(f, g(c)) * dg - lhs;
        } catch (const EvalError&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    std::vector<double> xs(kScanIntervals + 1), hs(kScanIntervals + 1);
    for (int i = 0; i <= kScanIntervals; ++i) {
        xs[i] = i == kScanIntervals ? t : back + (t - back) * i / kScanIntervals;
        hs[i] = h(xs[i]);
    }
    for (int i = 0; i <= kScanIntervals; ++i) {
        if (hs[i] == 0.0)
            return cert(xs[i]);
        if (i == 0 || std::isnan(hs[i]) || std::isnan(hs[i - 1]) || (hs[i - 1] < 0.0) == (hs[i] < 0.0))
            continue;
        double lo = xs[i - 1], hi = xs[i], hlo = hs[i - 1];
        const double width = 1e-12 * (1.0 + std::abs(t));
        for (int it = 0; it < kMaxBisections && hi - lo > width; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double hm = h(mid);
            if (hm == 0.0)
                return cert(mid);
            if ((hm < 0.0) == (hlo < 0.0)) {
                lo = mid;
                hlo = hm;
            } else {
                hi = mid;
            }
        }
        const auto a = cert(lo), b = cert(hi);
        return a.residual <= b.residual ? a : b;
    }

    int best = -1;
    for (int i = 0; i <= kScanIntervals; ++i)
        if (!std::isnan(hs[i]) && (best < 0 || std::abs(hs[i]) < std::abs(hs[best])))
            best = i;
    if (best >= 0 && std::abs(hs[best]) <= tol)
        return cert(xs[best]);
    throw InconclusiveSearch("no chain point in [" + format_real(back) + ", " + format_real(t) + "]" +
                             (best >= 0 ? "; smallest residual " + format_real(std::abs(hs[best])) +
                                              " at c=" + format_real(xs[best])
                                        : std::string()));
}

bool passes_increase_check(const TimeScale& ts, const RealFunction& g, std::optional<Window> window) {
    const TimeScale src = window ? windowed(ts, *window) : ts;
    const auto xs = increase_samples(src);
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(g(xs[i - 1]) < g(xs[i])))
            return false;
    return true;
}

TimeScale image_timescale(const TimeScale& ts, const RealFunction& g, std::optional<Window> window) {
    if (!passes_increase_check(ts, g, window))
        throw DomainError("g=" + g.to_string() + " is not strictly increasing on T=" + ts.describe());
    const TimeScale src = window ? windowed(ts, *window) : ts;
    const auto slope = affine_slope(g);
    if (const auto* grid = std::get_if<UniformGrid>(&src.repr())) {
        if (slope)
            return TimeScale::grid(g(grid->offset), *slope * grid->step, grid->lo, grid->hi);
        if (!(grid->lo && grid->hi))
            throw DomainError("image of an unbounded grid under nonaffine g=" + g.to_string() +
                              " needs a window");
        if (static_cast<std::size_t>(*grid->hi - *grid->lo) >= kMaxImagePoints)
            throw DomainError("image window holds too many grid points");
        std::vector<double> pts;
        for (std::int64_t k = *grid->lo; k <= *grid->hi; ++k)
            pts.push_back(g(grid->at(k)));
        return TimeScale::finite(std::move(pts));
    }
    if (const auto* fin = std::get_if<FiniteSet>(&src.repr())) {
        std::vector<double> pts;
        pts.reserve(fin->points.size());
        for (double x : fin->points)
            pts.push_back(g(x));
        return TimeScale::finite(std::move(pts));
    }
    if (const auto* iv = std::get_if<ContinuousInterval>(&src.repr()))
        return TimeScale::interval(g(iv->a), g(iv->b));
    std::vector<Piece> mapped;
    for (const auto& p : std::get<PieceUnion>(src.repr()).pieces)
        mapped.push_back(map_piece(p, g));
    return TimeScale::union_of(std::move(mapped));
}

double compose_monotone(const TimeScale& ts, const RealFunction& g, const RealFunction& f, double t,
                        const FracOrder& alpha, const LimitOptions& opts) {
    const double dg = nabla(ts, g, t, alpha, opts).value;
    const TimeScale image = image_timescale(ts, g, local_window(ts, t));
    const double u = g(t);
    if (!image.contains(u))
        throw DomainError("g(t)=" + format_real(u) + " is not in the image scale " + image.describe());
    return nabla(image, f, u, order_one(), opts).value * dg;
}

double inverse_nabla(const TimeScale& ts, const RealFunction& f, double t, const FracOrder& alpha,
                     const LimitOptions& opts) {
    // Bracket f(x) = t over the source scale, doubling outwards when unbounded.
    const auto tmin = ts.min(), tmax = ts.max();
    const double anchor = tmin ? *tmin : (tmax ? *tmax : ts.nearest(0.0));
    double lo = tmin ? *tmin : anchor - 1.0;
    double hi = tmax ? *tmax : anchor + 1.0;
    for (int i = 0; i < 1100 && f(lo) > t; ++i) {
        if (tmin)
            break;
        lo = anchor - 2.0 * (anchor - lo);
    }
    for (int i = 0; i < 1100 && f(hi) < t; ++i) {
        if (tmax)
            break;
        hi = anchor + 2.0 * (hi - anchor);
    }
    if (f(lo) > t || f(hi) < t)
        throw DomainError("t=" + format_real(t) + " is not in Ran(f) for f=" + f.to_string());
    for (int i = 0; i < kMaxBisections && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < t ? lo : hi) = mid;
    }
    double x = ts.nearest(0.5 * (lo + hi));
    // Piece ends are scattered from one side; land on them exactly.
    if (!std::holds_alternative<UniformGrid>(ts.repr()))
        for (const auto& p : ts.pieces())
            for (double end : {p.lo, p.hi})
                if (std::abs(x - end) <= 1e-12 * (1.0 + std::abs(end)))
                    x = end;
    if (std::abs(f(x) - t) > 1e-9 * (1.0 + std::abs(t)))
        throw DomainError("t=" + format_real(t) + " is not in Ran(f) for f=" + f.to_string());

    const TimeScale image = image_timescale(ts, f, local_window(ts, x));
    const double u = image.nearest(t);
    if (!tk_contains(image, u))
        throw DomainError("t=" + format_real(t) + " not in T^k of the image scale");
    const double d = nabla(ts, f, x, order_one(), opts).value;
    if (d == 0.0)
        throw DomainError("zero denominator: nabla f(f^-1(t)) = 0 at t=" + format_real(t));
    if (alpha.is_one())
        return 1.0 / d;
    return std::pow(nu(image, u), 1.0 - alpha.value()) / d;
}

} // namespace nabla
