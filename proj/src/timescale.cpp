#include "nabla/timescale.hpp"

#include "nabla/error.hpp"
#include "nabla/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nabla {

namespace {

constexpr std::int64_t kMaterializeLimit = 1'000'000;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::optional<std::int64_t> grid_index(const UniformGrid& g, double t) {
    const double k = (t - g.offset) / g.step;
    const double r = std::nearbyint(k);
    if (std::abs(k - r) > kMembershipTol)
        return std::nullopt;
    if (std::abs(r) > 9e15)
        return std::nullopt;
    const auto idx = static_cast<std::int64_t>(r);
    if ((g.lo && idx < *g.lo) || (g.hi && idx > *g.hi))
        return std::nullopt;
    return idx;
}

bool in_piece(const Piece& p, double t) {
    if (p.is_point())
        return t == p.lo;
    return t >= p.lo - kMembershipTol && t <= p.hi + kMembershipTol;
}

// Index of the piece holding t, or npos.
std::size_t find_piece(const std::vector<Piece>& pieces, double t) {
    auto it = std::lower_bound(pieces.begin(), pieces.end(), t,
                               [](const Piece& p, double v) { return p.hi + kMembershipTol < v; });
    for (; it != pieces.end() && it->lo - kMembershipTol <= t; ++it)
        if (in_piece(*it, t))
            return static_cast<std::size_t>(it - pieces.begin());
    return static_cast<std::size_t>(-1);
}

[[noreturn]] void not_member(const TimeScale& ts, double t) {
    throw DomainError("t=" + format_real(t) + " is not in T=" + ts.describe());
}

void require_member(const TimeScale& ts, double t) {
    if (!ts.contains(t))
        not_member(ts, t);
}

std::vector<double> materialize(const UniformGrid& g) {
    if (!g.lo || !g.hi)
        throw DomainError("cannot enumerate an unbounded grid");
    if (*g.hi - *g.lo + 1 > 10 * kMaterializeLimit)
        throw DomainError("grid too large to enumerate");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(*g.hi - *g.lo + 1));
    for (std::int64_t k = *g.lo; k <= *g.hi; ++k)
        out.push_back(g.at(k));
    return out;
}

} // namespace

TimeScale TimeScale::integers() { return TimeScale(UniformGrid{0.0, 1.0, std::nullopt, std::nullopt}); }

TimeScale TimeScale::naturals() { return TimeScale(UniformGrid{0.0, 1.0, 1, std::nullopt}); }

TimeScale TimeScale::multiples(double step) { return grid(0.0, step); }

TimeScale TimeScale::grid(double offset, double step, std::optional<std::int64_t> lo,
                          std::optional<std::int64_t> hi) {
    if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(offset))
        throw DomainError("grid step must be a positive finite real");
    if (lo && hi && *lo > *hi)
        throw DomainError("grid bounds are empty");
    return TimeScale(UniformGrid{offset, step, lo, hi});
}

TimeScale TimeScale::interval(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
        throw DomainError("interval needs finite a < b, got [" + format_real(a) + ", " +
                          format_real(b) + "]");
    return TimeScale(ContinuousInterval{a, b});
}

TimeScale TimeScale::finite(std::vector<double> points) {
    if (points.empty())
        throw DomainError("a finite time scale needs at least one point");
    for (double v : points)
        if (!std::isfinite(v))
            throw DomainError("time-scale points must be finite");
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return TimeScale(FiniteSet{std::move(points)});
}

TimeScale TimeScale::union_of(std::vector<Piece> pieces) {
    if (pieces.empty())
        throw DomainError("a time scale must be nonempty");
    for (const auto& p : pieces)
        if (!std::isfinite(p.lo) || !std::isfinite(p.hi) || p.lo > p.hi)
            throw DomainError("malformed piece [" + format_real(p.lo) + ", " + format_real(p.hi) + "]");
    std::sort(pieces.begin(), pieces.end(),
              [](const Piece& x, const Piece& y) { return x.lo < y.lo || (x.lo == y.lo && x.hi < y.hi); });
    std::vector<Piece> merged;
    for (const auto& p : pieces) {
        if (!merged.empty() && p.lo <= merged.back().hi)
            merged.back().hi = std::max(merged.back().hi, p.hi);
        else
            merged.push_back(p);
    }
    const bool all_points = std::all_of(merged.begin(), merged.end(), [](const Piece& p) { return p.is_point(); });
    if (all_points) {
        std::vector<double> pts;
        for (const auto& p : merged)
            pts.push_back(p.lo);
        return TimeScale(FiniteSet{std::move(pts)});
    }
    if (merged.size() == 1)
        return TimeScale(ContinuousInterval{merged[0].lo, merged[0].hi});
    return TimeScale(PieceUnion{std::move(merged)});
}

bool TimeScale::contains(double t) const {
    if (!std::isfinite(t))
        return false;
    return std::visit(overloaded{
                          [&](const FiniteSet& f) { return std::binary_search(f.points.begin(), f.points.end(), t); },
                          [&](const UniformGrid& g) { return grid_index(g, t).has_value(); },
                          [&](const ContinuousInterval& c) {
                              return t >= c.a - kMembershipTol && t <= c.b + kMembershipTol;
                          },
                          [&](const PieceUnion& u) { return find_piece(u.pieces, t) != static_cast<std::size_t>(-1); },
                      },
                      repr_);
}

std::optional<double> TimeScale::min() const {
    return std::visit(overloaded{
                          [](const FiniteSet& f) -> std::optional<double> { return f.points.front(); },
                          [](const UniformGrid& g) -> std::optional<double> {
                              if (g.lo)
                                  return g.at(*g.lo);
                              return std::nullopt;
                          },
                          [](const ContinuousInterval& c) -> std::optional<double> { return c.a; },
                          [](const PieceUnion& u) -> std::optional<double> { return u.pieces.front().lo; },
                      },
                      repr_);
}

std::optional<double> TimeScale::max() const {
    return std::visit(overloaded{
                          [](const FiniteSet& f) -> std::optional<double> { return f.points.back(); },
                          [](const UniformGrid& g) -> std::optional<double> {
                              if (g.hi)
                                  return g.at(*g.hi);
                              return std::nullopt;
                          },
                          [](const ContinuousInterval& c) -> std::optional<double> { return c.b; },
                          [](const PieceUnion& u) -> std::optional<double> { return u.pieces.back().hi; },
                      },
                      repr_);
}

bool TimeScale::is_finite() const {
    return std::visit(overloaded{
                          [](const FiniteSet&) { return true; },
                          [](const UniformGrid& g) { return g.lo.has_value() && g.hi.has_value(); },
                          [](const ContinuousInterval&) { return false; },
                          [](const PieceUnion&) { return false; },
                      },
                      repr_);
}

std::vector<Piece> TimeScale::pieces() const {
    return std::visit(overloaded{
                          [](const FiniteSet& f) {
                              std::vector<Piece> out;
                              for (double v : f.points)
                                  out.push_back({v, v});
                              return out;
                          },
                          [](const UniformGrid& g) {
                              std::vector<Piece> out;
                              for (double v : materialize(g))
                                  out.push_back({v, v});
                              return out;
                          },
                          [](const ContinuousInterval& c) { return std::vector<Piece>{{c.a, c.b}}; },
                          [](const PieceUnion& u) { return u.pieces; },
                      },
                      repr_);
}

std::vector<double> TimeScale::points() const {
    if (!is_finite())
        throw DomainError("T=" + describe() + " is not a finite time scale");
    if (const auto* f = std::get_if<FiniteSet>(&repr_))
        return f->points;
    return materialize(std::get<UniformGrid>(repr_));
}

TimeScale TimeScale::clip(double lo, double hi) const {
    auto empty = [&]() {
        return DomainError("T=" + describe() + " has no points in [" + format_real(lo) + ", " + format_real(hi) +
                           "]");
    };
    if (!(lo <= hi))
        throw empty();
    return std::visit(
        overloaded{
            [&](const FiniteSet& f) {
                std::vector<double> pts;
                for (double v : f.points)
                    if (v >= lo && v <= hi)
                        pts.push_back(v);
                if (pts.empty())
                    throw empty();
                return TimeScale(FiniteSet{std::move(pts)});
            },
            [&](const UniformGrid& g) {
                const double klo = std::ceil((lo - g.offset) / g.step - kMembershipTol);
                const double khi = std::floor((hi - g.offset) / g.step + kMembershipTol);
                if (!(klo <= khi) || std::abs(klo) > 9e15 || std::abs(khi) > 9e15)
                    throw empty();
                auto a = static_cast<std::int64_t>(klo);
                auto b = static_cast<std::int64_t>(khi);
                if (g.lo)
                    a = std::max(a, *g.lo);
                if (g.hi)
                    b = std::min(b, *g.hi);
                if (a > b)
                    throw empty();
                UniformGrid bounded{g.offset, g.step, a, b};
                if (b - a + 1 <= kMaterializeLimit)
                    return TimeScale(FiniteSet{materialize(bounded)});
                return TimeScale(bounded);
            },
            [&](const ContinuousInterval& c) {
                const double a = std::max(c.a, lo);
                const double b = std::min(c.b, hi);
                if (a > b)
                    throw empty();
                if (a == b)
                    return TimeScale(FiniteSet{{a}});
                return TimeScale(ContinuousInterval{a, b});
            },
            [&](const PieceUnion& u) {
                std::vector<Piece> kept;
                for (const auto& p : u.pieces) {
                    const double a = std::max(p.lo, lo);
                    const double b = std::min(p.hi, hi);
                    if (a <= b)
                        kept.push_back({a, b});
                }
                if (kept.empty())
                    throw empty();
                return union_of(std::move(kept));
            },
        },
        repr_);
}

double TimeScale::nearest(double x) const {
    return std::visit(overloaded{
                          [&](const FiniteSet& f) {
                              auto it = std::lower_bound(f.points.begin(), f.points.end(), x);
                              if (it == f.points.end())
                                  return f.points.back();
                              if (it == f.points.begin())
                                  return *it;
                              const double below = *std::prev(it);
                              return (x - below <= *it - x) ? below : *it;
                          },
                          [&](const UniformGrid& g) {
                              double k = std::nearbyint((x - g.offset) / g.step);
                              if (g.lo)
                                  k = std::max(k, static_cast<double>(*g.lo));
                              if (g.hi)
                                  k = std::min(k, static_cast<double>(*g.hi));
                              return g.at(static_cast<std::int64_t>(k));
                          },
                          [&](const ContinuousInterval& c) { return std::clamp(x, c.a, c.b); },
                          [&](const PieceUnion& u) {
                              double best = u.pieces.front().lo;
                              double best_dist = std::numeric_limits<double>::infinity();
                              for (const auto& p : u.pieces) {
                                  const double c = std::clamp(x, p.lo, p.hi);
                                  if (std::abs(x - c) < best_dist) {
                                      best = c;
                                      best_dist = std::abs(x - c);
                                  }
                              }
                              return best;
                          },
                      },
                      repr_);
}

std::pair<double, double> TimeScale::dense_reach(double t) const {
    return std::visit(overloaded{
                          [](const FiniteSet&) { return std::pair{0.0, 0.0}; },
                          [](const UniformGrid&) { return std::pair{0.0, 0.0}; },
                          [&](const ContinuousInterval& c) {
                              return std::pair{std::max(0.0, t - c.a), std::max(0.0, c.b - t)};
                          },
                          [&](const PieceUnion& u) {
                              const auto i = find_piece(u.pieces, t);
                              if (i == static_cast<std::size_t>(-1) || u.pieces[i].is_point())
                                  return std::pair{0.0, 0.0};
                              return std::pair{std::max(0.0, t - u.pieces[i].lo), std::max(0.0, u.pieces[i].hi - t)};
                          },
                      },
                      repr_);
}

std::string TimeScale::describe() const {
    if (const auto* g = std::get_if<UniformGrid>(&repr_)) {
        if (g->offset != 0.0 || g->hi || (g->lo && !(g->step == 1.0 && *g->lo == 1))) {
            std::string s = "grid(offset=" + format_real(g->offset) + ",step=" + format_real(g->step);
            if (g->lo)
                s += ",lo=" + std::to_string(*g->lo);
            if (g->hi)
                s += ",hi=" + std::to_string(*g->hi);
            return s + ")";
        }
    }
    return format_timescale(*this);
}

double rho(const TimeScale& ts, double t) {
    require_member(ts, t);
    return std::visit(overloaded{
                          [&](const FiniteSet& f) {
                              auto it = std::lower_bound(f.points.begin(), f.points.end(), t);
                              return it == f.points.begin() ? t : *std::prev(it);
                          },
                          [&](const UniformGrid& g) {
                              const auto k = *grid_index(g, t);
                              return (g.lo && k == *g.lo) ? t : g.at(k - 1);
                          },
                          [&](const ContinuousInterval&) { return t; },
                          [&](const PieceUnion& u) {
                              const auto i = find_piece(u.pieces, t);
                              const auto& p = u.pieces[i];
                              if (!p.is_point() && t > p.lo)
                                  return t;
                              return i == 0 ? t : u.pieces[i - 1].hi;
                          },
                      },
                      ts.repr());
}

double sigma(const TimeScale& ts, double t) {
    require_member(ts, t);
    return std::visit(overloaded{
                          [&](const FiniteSet& f) {
                              auto it = std::upper_bound(f.points.begin(), f.points.end(), t);
                              return it == f.points.end() ? t : *it;
                          },
                          [&](const UniformGrid& g) {
                              const auto k = *grid_index(g, t);
                              return (g.hi && k == *g.hi) ? t : g.at(k + 1);
                          },
                          [&](const ContinuousInterval&) { return t; },
                          [&](const PieceUnion& u) {
                              const auto i = find_piece(u.pieces, t);
                              const auto& p = u.pieces[i];
                              if (!p.is_point() && t < p.hi)
                                  return t;
                              return i + 1 == u.pieces.size() ? t : u.pieces[i + 1].lo;
                          },
                      },
                      ts.repr());
}

double nu(const TimeScale& ts, double t) { return t - rho(ts, t); }

PointClass classify_point(const TimeScale& ts, double t) {
    const double g = nu(ts, t);
    return {g > 0.0 ? PointKind::LeftScattered : PointKind::LeftDense, g};
}

bool tk_contains(const TimeScale& ts, double t) {
    if (rho(ts, t) != t)
        return true;
    if (ts.dense_reach(t).first > 0.0)
        return true;
    // t is the minimum; it leaves T^k only when right-scattered.
    return !(sigma(ts, t) > t);
}

TimeScale restrict(const TimeScale& ts, double a, double b) {
    require_member(ts, a);
    require_member(ts, b);
    if (!(a < b))
        throw DomainError("restrict needs a < b, got a=" + format_real(a) + ", b=" + format_real(b));
    return ts.clip(a, b);
}

double iterate_rho(const TimeScale& ts, double t, std::uint64_t n) {
    require_member(ts, t);
    if (const auto* g = std::get_if<UniformGrid>(&ts.repr())) {
        if (n == 0)
            return t;
        const auto k = *grid_index(*g, t);
        const auto steps = static_cast<std::int64_t>(std::min<std::uint64_t>(n, std::uint64_t{1} << 62));
        std::int64_t target = k - steps;
        if (g->lo && target <= *g->lo)
            return k == *g->lo ? t : g->at(*g->lo);
        return g->at(target);
    }
    double x = t;
    for (std::uint64_t i = 0; i < n; ++i) {
        const double prev = rho(ts, x);
        if (prev == x)
            break;
        x = prev;
    }
    return x;
}

} // namespace nabla
