#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace nabla {

/// Absolute tolerance on grid-index residuals and interval endpoints.
inline constexpr double kMembershipTol = 1e-12;

struct FiniteSet {
    std::vector<double> points; // strictly increasing, nonempty
    bool operator==(const FiniteSet&) const = default;
};

/// Members are offset + k * step for integer k in [lo, hi] (bounds optional).
struct UniformGrid {
    double offset = 0.0;
    double step = 1.0;
    std::optional<std::int64_t> lo;
    std::optional<std::int64_t> hi;

    double at(std::int64_t k) const { return offset + static_cast<double>(k) * step; }
    bool operator==(const UniformGrid&) const = default;
};

struct ContinuousInterval {
    double a = 0.0;
    double b = 1.0;
    bool operator==(const ContinuousInterval&) const = default;
};

/// A closed interval [lo, hi]; an isolated point when lo == hi.
struct Piece {
    double lo = 0.0;
    double hi = 0.0;

    bool is_point() const { return lo == hi; }
    bool operator==(const Piece&) const = default;
};

struct PieceUnion {
    std::vector<Piece> pieces; // sorted, pairwise disjoint, positive gaps
    bool operator==(const PieceUnion&) const = default;
};

enum class PointKind { LeftDense, LeftScattered };

struct PointClass {
    PointKind kind;
    double graininess;
};

/// A nonempty closed subset of the reals. Immutable once built; every
/// factory normalizes its input, so two equal sets built from finite
/// pieces compare equal.
class TimeScale {
public:
    using Repr = std::variant<FiniteSet, UniformGrid, ContinuousInterval, PieceUnion>;

    static TimeScale integers();
    static TimeScale naturals();
    static TimeScale multiples(double step);
    static TimeScale grid(double offset, double step,
                          std::optional<std::int64_t> lo = std::nullopt,
                          std::optional<std::int64_t> hi = std::nullopt);
    static TimeScale interval(double a, double b);
    static TimeScale finite(std::vector<double> points);
    static TimeScale union_of(std::vector<Piece> pieces);

    const Repr& repr() const noexcept { return repr_; }

    bool contains(double t) const;
    std::optional<double> min() const;
    std::optional<double> max() const;
    bool bounded() const { return min() && max(); }
    /// True when the scale has no interval pieces and is bounded.
    bool is_finite() const;

    /// Pieces of a bounded scale, grids materialized. Throws on unbounded scales.
    std::vector<Piece> pieces() const;

    /// Members of a finite scale in increasing order.
    std::vector<double> points() const;

    /// Member closest to x (ties go to the smaller member).
    double nearest(double x) const;

    /// Intersection with [lo, hi] for arbitrary reals; throws if empty.
    TimeScale clip(double lo, double hi) const;

    /// Length of the interval piece around t on each side: (t - lo, hi - t).
    /// Zero on a side where t has no dense neighbourhood.
    std::pair<double, double> dense_reach(double t) const;

    std::string describe() const;

private:
    explicit TimeScale(Repr r) : repr_(std::move(r)) {}
    Repr repr_;
};

inline bool operator==(const TimeScale& a, const TimeScale& b) { return a.repr() == b.repr(); }

double rho(const TimeScale& ts, double t);
double sigma(const TimeScale& ts, double t);
double nu(const TimeScale& ts, double t);
PointClass classify_point(const TimeScale& ts, double t);
bool tk_contains(const TimeScale& ts, double t);
TimeScale restrict(const TimeScale& ts, double a, double b);
double iterate_rho(const TimeScale& ts, double t, std::uint64_t n);

/// Parses `Z`, `N`, `hZ:<h>`, `interval:<a>:<b>`, `finite:<v>,...`,
/// `union:(<piece>;...)` with pieces `point:<v>` / `interval:<a>:<b>`.
TimeScale parse_timescale(const std::string& text);

/// Inverse of parse_timescale for the representable variants.
std::string format_timescale(const TimeScale& ts);

} // namespace nabla
