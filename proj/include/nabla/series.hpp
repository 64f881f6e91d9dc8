#pragma once

#include "nabla/expr.hpp"
#include "nabla/frac_order.hpp"
#include "nabla/fracdiff.hpp"
#include "nabla/rational.hpp"
#include "nabla/timescale.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace nabla {

/// Sum over i of f_1(rho)...f_{i-1}(rho) * nabla f_i(t) * f_{i+1}(t)...f_m(t).
double general_product_rule(const TimeScale& ts, const std::vector<RealFunction>& fs, double t,
                            const FracOrder& alpha, const LimitOptions& opts = {});

/// f_1 * f_2 * ... * f_m as one expression.
RealFunction product_function(const std::vector<RealFunction>& fs);

/// ((back + jump)^(m+1) - back^(m+1)) / jump.
template <class Scalar>
Scalar power_sum_closed(const Scalar& back, const Scalar& jump, unsigned m) {
    Scalar hi = 1, lo = 1;
    const Scalar top = back + jump;
    for (unsigned i = 0; i <= m; ++i) {
        hi *= top;
        lo *= back;
    }
    return (hi - lo) / jump;
}

/// Sum over i = 0..m of back^i * here^(m-i).
template <class Scalar>
Scalar power_sum_terms(const Scalar& back, const Scalar& here, unsigned m) {
    Scalar sum = 0, bp = 1;
    for (unsigned i = 0; i <= m; ++i) {
        Scalar hp = 1;
        for (unsigned j = 0; j < m - i; ++j)
            hp *= here;
        sum += bp * hp;
        bp *= back;
    }
    return sum;
}

struct PowerSum {
    double value = 0.0;
    std::optional<Rational> exact; // set when computed over the rationals
};

/// Closed form of sum_i f(rho)^i f(t)^(m-i). Exact when f is a polynomial
/// with literal coefficients. Throws DomainError when nu^alpha * nabla f(t) = 0.
PowerSum power_sum(const TimeScale& ts, const RealFunction& f, double t, const FracOrder& alpha, unsigned m,
                   const LimitOptions& opts = {});

/// Direct summation of the same sum.
PowerSum power_sum_bruteforce(const TimeScale& ts, const RealFunction& f, double t, unsigned m);

struct Expansion {
    double value = 0.0;        // f(r) + sum of terms
    double anchor_value = 0.0; // f(r)
    std::vector<double> terms; // nu(rho^j t)^alpha * nabla f(rho^j t), j = 0..n-1
};

/// Telescoping expansion of f(t) from an anchor r = rho^n(t), n >= 1.
/// Throws DomainError when r is not reached within 10^6 backward steps.
Expansion backward_expansion(const TimeScale& ts, const RealFunction& f, double t, double r,
                             const FracOrder& alpha, const LimitOptions& opts = {});

} // namespace nabla
