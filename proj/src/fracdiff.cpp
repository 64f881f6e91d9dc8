#include "nabla/fracdiff.hpp"

#include "nabla/error.hpp"
#include "nabla/format.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <vector>

namespace nabla {

namespace {

void require_tk(const TimeScale& ts, double t) {
    if (!ts.contains(t))
        throw DomainError("t=" + format_real(t) + " is not in T=" + ts.describe());
    if (!tk_contains(ts, t))
        throw DomainError("t=" + format_real(t) + " not in T^k (right-scattered minimum)");
}

struct OneSided {
    double value = 0.0;
    double error = 0.0;
    int samples = 0;
};

bool agree(double a, double b, double tol, double scale) { return std::abs(a - b) <= tol * (1.0 + std::abs(scale)); }

// Quotients at s = t - dir * delta_k. Returns the accepted estimate or
// throws NotDifferentiable with the raw quotient trace.
OneSided one_sided_limit(const ScalarFunction& f, double t, double reach, int dir, const FracOrder& alpha,
                         const LimitOptions& opts) {
    const double ft = f(t);
    const double delta0 = std::min(opts.initial_step, reach);
    std::vector<double> raw;
    std::vector<double> acc;
    raw.reserve(static_cast<std::size_t>(opts.max_halvings) + 1);

    auto quotient = [&](int k) {
        const double delta = std::ldexp(delta0, -k);
        const double s = t - dir * delta;
        const double gap = t - s; // exact for nearby s
        return (ft - f(s)) / signed_power(gap, alpha);
    };
    auto accelerated = [&](std::size_t k) {
        if (k < 2)
            return raw[k];
        const double d1 = raw[k - 1] - raw[k - 2];
        const double d2 = raw[k] - raw[k - 1];
        const double denom = d2 - d1;
        if (d1 == 0.0 || denom == 0.0 || !(std::abs(d2 / d1) < 0.98))
            return raw[k];
        const double a = raw[k] - d2 * d2 / denom;
        return std::isfinite(a) ? a : raw[k];
    };

    std::optional<std::size_t> settled;
    for (int k = 0; k <= opts.max_halvings; ++k) {
        double q = 0.0;
        try {
            q = quotient(k);
        } catch (const EvalError&) {
            // Leading steps may leave the domain of f (e.g. ln near 0); halve past them.
            if (raw.empty() && k < opts.max_halvings)
                continue;
            throw;
        }
        raw.push_back(q);
        acc.push_back(accelerated(raw.size() - 1));
        const std::size_t n = acc.size();
        if (n >= 3 && agree(acc[n - 1], acc[n - 2], opts.tolerance, acc[n - 1]) &&
            agree(acc[n - 2], acc[n - 3], opts.tolerance, acc[n - 1])) {
            settled = n - 1;
            break;
        }
    }
    if (!settled)
        throw NotDifferentiable("difference quotients at t=" + format_real(t) + " did not converge after " +
                                    std::to_string(opts.max_halvings) + " halvings",
                                raw);

    // Keep refining while successive estimates keep tightening.
    std::size_t best = *settled;
    double best_gap = std::abs(acc[best] - acc[best - 1]);
    for (int k = static_cast<int>(best) + 1; k <= opts.max_halvings && best_gap > 0.0; ++k) {
        try {
            raw.push_back(quotient(k));
        } catch (const Error&) {
            break;
        }
        acc.push_back(accelerated(raw.size() - 1));
        const double gap = std::abs(acc.back() - acc[acc.size() - 2]);
        if (!(gap < best_gap))
            break;
        best = acc.size() - 1;
        best_gap = gap;
    }
    return {acc[best], best_gap, static_cast<int>(raw.size())};
}

// For alpha < 1 the quotient factors as [first-order quotient] * (t - s)^(1 - alpha),
// so a finite first-order limit forces the order-alpha limit to 0. The direct
// order-alpha sequence is only used when that limit does not exist.
OneSided order_limit(const ScalarFunction& f, double t, double reach, int dir, const FracOrder& alpha,
                     const LimitOptions& opts) {
    if (alpha.is_one())
        return one_sided_limit(f, t, reach, dir, alpha, opts);
    static const FracOrder one = classify_alpha(1, 1);
    int spent = 0;
    try {
        const auto first = one_sided_limit(f, t, reach, dir, one, opts);
        return {0.0, 0.0, first.samples};
    } catch (const NotDifferentiable& e) {
        spent = static_cast<int>(e.trace().size());
    }
    auto out = one_sided_limit(f, t, reach, dir, alpha, opts);
    out.samples += spent;
    return out;
}

} // namespace

std::string to_string(NablaMethod m) {
    switch (m) {
    case NablaMethod::ExactScattered: return "ExactScattered";
    case NablaMethod::DenseLimitTwoSided: return "DenseLimitTwoSided";
    case NablaMethod::DenseLimitLeft: return "DenseLimitLeft";
    case NablaMethod::DenseLimitRight: return "DenseLimitRight";
    }
    return "?";
}

LimitOptions LimitOptions::from_env() {
    LimitOptions opts;
    if (const char* env = std::getenv("NABLA_SCALE_TOL"); env && *env) {
        const double tol = parse_real(env, "NABLA_SCALE_TOL");
        if (!(tol > 0.0))
            throw ParseError("NABLA_SCALE_TOL must be positive");
        opts.tolerance = tol;
    }
    return opts;
}

NablaResult nabla(const TimeScale& ts, const ScalarFunction& f, double t, const FracOrder& alpha,
                  const LimitOptions& opts) {
    require_tk(ts, t);
    const double back = rho(ts, t);
    if (back < t) {
        const double value = (f(t) - f(back)) / signed_power(t - back, alpha);
        if (!std::isfinite(value))
            throw EvalError("nabla quotient at t=" + format_real(t) + " is not finite");
        return {value, NablaMethod::ExactScattered, 0.0, 2};
    }

    const auto [left_reach, right_reach] = ts.dense_reach(t);
    const bool has_left = left_reach > 0.0;
    const bool has_right = alpha.odd_reciprocal() && right_reach > 0.0;
    if (!has_left && !has_right)
        throw DomainError("left-dense t=" + format_real(t) + " has no approach points in T=" + ts.describe() +
                          (alpha.odd_reciprocal() ? "" : " on the left"));

    if (has_left && has_right) {
        const auto l = order_limit(f, t, left_reach, +1, alpha, opts);
        const auto r = order_limit(f, t, right_reach, -1, alpha, opts);
        if (!agree(l.value, r.value, 10.0 * opts.tolerance, std::max(std::abs(l.value), std::abs(r.value))))
            throw NotDifferentiable("one-sided limits at t=" + format_real(t) + " disagree: left " +
                                        format_real(l.value) + ", right " + format_real(r.value),
                                    {l.value, r.value});
        const double mid = 0.5 * (l.value + r.value);
        const double err = std::max({l.error, r.error, 0.5 * std::abs(l.value - r.value)});
        return {mid, NablaMethod::DenseLimitTwoSided, err, l.samples + r.samples};
    }
    if (has_left) {
        const auto l = order_limit(f, t, left_reach, +1, alpha, opts);
        return {l.value, NablaMethod::DenseLimitLeft, l.error, l.samples};
    }
    const auto r = order_limit(f, t, right_reach, -1, alpha, opts);
    return {r.value, NablaMethod::DenseLimitRight, r.error, r.samples};
}

NablaResult nabla(const TimeScale& ts, const RealFunction& f, double t, const FracOrder& alpha,
                  const LimitOptions& opts) {
    return nabla(ts, ScalarFunction([&f](double x) { return f.body().eval(x); }), t, alpha, opts);
}

double shift_residual(const TimeScale& ts, const RealFunction& f, double t, const FracOrder& alpha,
                      const LimitOptions& opts) {
    const auto d = nabla(ts, f, t, alpha, opts);
    const double back = rho(ts, t);
    const double jump = signed_power(t - back, alpha);
    return std::fma(jump, d.value, f(back) - f(t));
}

double linear_combo(const TimeScale& ts, const RealFunction& f, const RealFunction& g, double lambda,
                    double omega, double t, const FracOrder& alpha, const LimitOptions& opts) {
    return lambda * nabla(ts, f, t, alpha, opts).value + omega * nabla(ts, g, t, alpha, opts).value;
}

double product_nabla(const TimeScale& ts, const RealFunction& f, const RealFunction& g, double t,
                     const FracOrder& alpha, const LimitOptions& opts) {
    const double df = nabla(ts, f, t, alpha, opts).value;
    const double dg = nabla(ts, g, t, alpha, opts).value;
    return f(rho(ts, t)) * dg + g(t) * df;
}

double constant_rule(const TimeScale& ts, double t, const FracOrder&) {
    require_tk(ts, t);
    return 0.0;
}

double identity_rule(const TimeScale& ts, double t, const FracOrder& alpha) {
    require_tk(ts, t);
    if (alpha.is_one())
        return 1.0;
    return std::pow(nu(ts, t), 1.0 - alpha.value());
}

} // namespace nabla
