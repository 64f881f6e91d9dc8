#pragma once

#include "nabla/expr.hpp"
#include "nabla/frac_order.hpp"
#include "nabla/fracdiff.hpp"
#include "nabla/timescale.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nabla {

enum class ExtremumKind { LeftMax, LeftMin, Both, Neither };

std::string to_string(ExtremumKind k);

struct ExtremumReport {
    ExtremumKind kind = ExtremumKind::Neither;
    std::optional<double> derivative; // empty when the derivative does not exist
    bool sampled = false;             // decided from samples of a left neighbourhood
    bool necessary_holds = true;      // left-max => nabla >= 0, left-min => nabla <= 0
    bool sufficient_holds = true;     // nabla > 0 => left-max, nabla < 0 => left-min
};

/// Local left-extremum test at t0. Scattered points compare f(rho(t0)) with
/// f(t0); dense points compare f over 64 geometric samples in (t0 - d, t0),
/// d = 1e-3 clipped to the dense piece, then again with d / 16.
ExtremumReport local_left_extremum(const TimeScale& ts, const RealFunction& f, double t0, const FracOrder& alpha,
                                   const LimitOptions& opts = {});

struct ExtremePoints {
    double argmin = 0.0;
    double argmax = 0.0;
    double min_value = 0.0;
    double max_value = 0.0;
};

/// Global extremes of f on [a, b]_T; ties go to the smallest point.
ExtremePoints extreme_values(const TimeScale& ts, const RealFunction& f, double a, double b);

/// t1, t2 in (a, b)_T with lhs <= mid <= rhs.
struct WitnessPair {
    double t1 = 0.0;
    double t2 = 0.0;
    double lhs = 0.0;
    double mid = 0.0;
    double rhs = 0.0;
    FracOrder alpha;
};

inline constexpr double kCertifyTol = 1e-9;

enum class WitnessKind { Rolle, Mean, Generalized };

/// Certifying quotient at every searched interior point, in increasing order.
/// Rolle: nabla f. Mean: nabla f (divided by nu^(1-alpha) when alpha < 1).
/// Generalized: nabla f / nabla g. `mid` is the value the quotients bracket.
struct WitnessScan {
    std::vector<double> points;
    std::vector<double> quotients;
    std::vector<bool> dense; // point sampled from a continuous piece
    double mid = 0.0;
};

WitnessScan witness_scan(WitnessKind kind, const TimeScale& ts, const RealFunction& f, const RealFunction* g,
                         double a, double b, const FracOrder& alpha, const LimitOptions& opts = {});

/// Smallest t1 with nabla f(t1) <= 0 and smallest t2 with nabla f(t2) >= 0.
/// Needs f(a) = f(b) to 1e-12. Throws InconclusiveSearch when no witness is found.
WitnessPair rolle_witnesses(const TimeScale& ts, const RealFunction& f, double a, double b, const FracOrder& alpha,
                            const LimitOptions& opts = {});

/// Witnesses for nabla f / nabla g bracketing (f(b) - f(a)) / (g(b) - g(a)).
/// Needs nabla g > 0 at every searched point and g(a) != g(b).
WitnessPair gmvt_witnesses(const TimeScale& ts, const RealFunction& f, const RealFunction& g, double a, double b,
                           const FracOrder& alpha, const LimitOptions& opts = {});

/// Witnesses for the mean slope (f(b) - f(a)) / (b - a). For alpha < 1 only
/// left-scattered points are searched, using nabla f / nu^(1 - alpha).
WitnessPair mvt_witnesses(const TimeScale& ts, const RealFunction& f, double a, double b, const FracOrder& alpha,
                          const LimitOptions& opts = {});

} // namespace nabla
