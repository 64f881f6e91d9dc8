#pragma once

#include "nabla/expr.hpp"
#include "nabla/frac_order.hpp"
#include "nabla/timescale.hpp"

#include <functional>
#include <string>

namespace nabla {

enum class NablaMethod { ExactScattered, DenseLimitTwoSided, DenseLimitLeft, DenseLimitRight };

std::string to_string(NablaMethod m);

struct NablaResult {
    double value = 0.0;
    NablaMethod method = NablaMethod::ExactScattered;
    double error_estimate = 0.0; // zero for ExactScattered
    int samples_used = 0;
};

/// Controls the shrinking-step limit used at left-dense points.
struct LimitOptions {
    double tolerance = 1e-7; // agreement threshold, scaled by (1 + |quotient|)
    int max_halvings = 40;
    double initial_step = 0.1;

    /// Defaults, with `NABLA_SCALE_TOL` overriding the tolerance when set.
    static LimitOptions from_env();
};

using ScalarFunction = std::function<double(double)>;

/// Order-alpha nabla derivative of f at t on ts.
///
/// At a left-scattered t the value is the exact quotient
/// (f(t) - f(rho(t))) / nu(t)^alpha. At a left-dense t it is the limit of
/// (f(t) - f(s)) / (t - s)^alpha as s -> t within ts: from both sides for
/// odd-reciprocal orders, from the left otherwise. Step sizes halve from
/// min(initial_step, distance to the end of the dense piece); the limit is
/// accepted once three consecutive (Aitken-accelerated) estimates agree.
/// For alpha < 1 a side whose first-order quotient converges contributes 0.
///
/// Throws DomainError when t is not in T^k or has no approach points,
/// NotDifferentiable when the quotients do not settle.
NablaResult nabla(const TimeScale& ts, const ScalarFunction& f, double t, const FracOrder& alpha,
                  const LimitOptions& opts = {});
NablaResult nabla(const TimeScale& ts, const RealFunction& f, double t, const FracOrder& alpha,
                  const LimitOptions& opts = {});

/// f(rho(t)) - [f(t) - nu(t)^alpha * nabla f(t)]; zero up to rounding.
double shift_residual(const TimeScale& ts, const RealFunction& f, double t, const FracOrder& alpha,
                      const LimitOptions& opts = {});

/// lambda * nabla f(t) + omega * nabla g(t).
double linear_combo(const TimeScale& ts, const RealFunction& f, const RealFunction& g, double lambda,
                    double omega, double t, const FracOrder& alpha, const LimitOptions& opts = {});

/// f(rho(t)) * nabla g(t) + g(t) * nabla f(t).
double product_nabla(const TimeScale& ts, const RealFunction& f, const RealFunction& g, double t,
                     const FracOrder& alpha, const LimitOptions& opts = {});

/// Derivative of a constant function: always 0 on T^k.
double constant_rule(const TimeScale& ts, double t, const FracOrder& alpha);

/// Derivative of the identity: nu(t)^(1 - alpha), or 1 when alpha = 1.
double identity_rule(const TimeScale& ts, double t, const FracOrder& alpha);

} // namespace nabla
