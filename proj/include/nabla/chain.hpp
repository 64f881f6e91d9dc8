#pragma once

#include "nabla/expr.hpp"
#include "nabla/frac_order.hpp"
#include "nabla/fracdiff.hpp"
#include "nabla/timescale.hpp"

#include <optional>

namespace nabla {

/// A point c in [rho(t), t] with f'(g(c)) * nabla g(t) matching nabla (f o g)(t).
struct ChainPointCert {
    double c = 0.0;
    double lhs = 0.0; // nabla (f o g)(t)
    double rhs = 0.0; // f'(g(c)) * nabla g(t)
    double residual = 0.0;
};

/// Closed window [lo, hi] of the source scale used when an image is built.
struct Window {
    double lo;
    double hi;
};

/// Integral form of the chain rule:
/// int_0^1 f'(g(rho) + phi * nu^alpha * nabla g(t)) dphi * nabla g(t).
double chain_integral(const TimeScale& ts, const RealFunction& f, const RealFunction& g, double t,
                      const FracOrder& alpha, const LimitOptions& opts = {});

/// f'(g(t)) * nabla g(t), which is wrong in general on scattered points.
double naive_chain(const TimeScale& ts, const RealFunction& f, const RealFunction& g, double t,
                   const FracOrder& alpha, const LimitOptions& opts = {});

/// Finds the smallest c with f'(g(c)) * nabla g(t) = nabla (f o g)(t).
/// Left-dense t gives c = t; a flat step of g gives c = rho(t).
/// Throws InconclusiveSearch when no root or near-root is found.
ChainPointCert chain_c_point(const TimeScale& ts, const RealFunction& f, const RealFunction& g, double t,
                             const FracOrder& alpha, const LimitOptions& opts = {});

/// True when g increases strictly across ~200 sample pairs of ts (inside
/// `window` when given).
bool passes_increase_check(const TimeScale& ts, const RealFunction& g, std::optional<Window> window = {});

/// The range of a strictly increasing g on ts, restricted to `window` when
/// given. Affine g keeps grids as grids; other g on unbounded grids need a window.
TimeScale image_timescale(const TimeScale& ts, const RealFunction& g, std::optional<Window> window = {});

/// (nabla^1 f over the image scale at g(t)) * nabla^alpha g(t).
double compose_monotone(const TimeScale& ts, const RealFunction& g, const RealFunction& f, double t,
                        const FracOrder& alpha, const LimitOptions& opts = {});

/// Derivative of the inverse of f at a point of the image scale.
double inverse_nabla(const TimeScale& ts, const RealFunction& f, double t, const FracOrder& alpha,
                     const LimitOptions& opts = {});

} // namespace nabla
