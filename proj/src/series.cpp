#include "nabla/series.hpp"

#include "nabla/error.hpp"
#include "nabla/format.hpp"

#include <cmath>

namespace nabla {

namespace {

constexpr std::uint64_t kMaxExpansionSteps = 1'000'000;

[[noreturn]] void degenerate_jump(double t) {
    throw DomainError("power sum needs nu(t)^alpha * nabla f(t) != 0, which fails at t=" + format_real(t));
}

} // namespace

double general_product_rule(const TimeScale& ts, const std::vector<RealFunction>& fs, double t,
                            const FracOrder& alpha, const LimitOptions& opts) {
    if (fs.size() < 2)
        throw DomainError("the product rule needs at least two factors");
    const double back = rho(ts, t);
    std::vector<double> d(fs.size()), at_back(fs.size()), at_t(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) {
        d[i] = nabla(ts, fs[i], t, alpha, opts).value;
        at_back[i] = fs[i](back);
        at_t[i] = fs[i](t);
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        double term = d[i];
        for (std::size_t j = i + 1; j < fs.size(); ++j)
            term *= at_t[j];
        double prefix = 1.0;
        for (std::size_t j = 0; j < i; ++j)
            prefix *= at_back[j];
        sum += prefix * term;
    }
    return sum;
}

RealFunction product_function(const std::vector<RealFunction>& fs) {
    if (fs.empty())
        throw DomainError("empty product");
    Expr body = fs.front().body();
    for (std::size_t i = 1; i < fs.size(); ++i)
        body = Expr::binary(BinaryOp::Mul, body, fs[i].body());
    return RealFunction(body);
}

PowerSum power_sum(const TimeScale& ts, const RealFunction& f, double t, const FracOrder& alpha, unsigned m,
                   const LimitOptions& opts) {
    if (m == 0)
        throw DomainError("power sum order m must be positive");
    const auto d = nabla(ts, f, t, alpha, opts);
    const double back = rho(ts, t);
    if (back == t)
        degenerate_jump(t);
    if (f.body().is_rational_polynomial()) {
        const Rational fb = f.body().eval_exact(to_rational(back));
        const Rational jump = f.body().eval_exact(to_rational(t)) - fb;
        if (jump == 0)
            degenerate_jump(t);
        Rational exact = power_sum_closed<Rational>(fb, jump, m);
        return {exact.convert_to<double>(), std::move(exact)};
    }
    const double jump = signed_power(t - back, alpha) * d.value;
    if (jump == 0.0)
        degenerate_jump(t);
    return {power_sum_closed<double>(f(back), jump, m), std::nullopt};
}

PowerSum power_sum_bruteforce(const TimeScale& ts, const RealFunction& f, double t, unsigned m) {
    const double back = rho(ts, t);
    if (f.body().is_rational_polynomial()) {
        Rational exact = power_sum_terms<Rational>(f.body().eval_exact(to_rational(back)),
                                                   f.body().eval_exact(to_rational(t)), m);
        return {exact.convert_to<double>(), std::move(exact)};
    }
    return {power_sum_terms<double>(f(back), f(t), m), std::nullopt};
}

Expansion backward_expansion(const TimeScale& ts, const RealFunction& f, double t, double r,
                             const FracOrder& alpha, const LimitOptions& opts) {
    for (double x : {t, r})
        if (!ts.contains(x))
            throw DomainError("t=" + format_real(x) + " is not in T=" + ts.describe());
    if (!(r < t))
        throw DomainError("anchor r=" + format_real(r) + " must lie before t=" + format_real(t));

    Expansion out;
    double cur = t;
    for (std::uint64_t step = 0; cur != r; ++step) {
        const double back = rho(ts, cur);
        if (step == kMaxExpansionSteps || back == cur || back < r)
            throw DomainError("unreachable anchor: r=" + format_real(r) + " is not rho^n(t) for t=" +
                              format_real(t) + (back == cur ? " (left-dense point " + format_real(cur) + ")" : ""));
        out.terms.push_back(signed_power(cur - back, alpha) * nabla(ts, f, cur, alpha, opts).value);
        cur = back;
    }
    out.anchor_value = f(r);
    // Neumaier summation keeps long telescoping sums tight.
    double sum = out.anchor_value, comp = 0.0;
    for (double x : out.terms) {
        const double s = sum + x;
        comp += std::abs(sum) >= std::abs(x) ? (sum - s) + x : (x - s) + sum;
        sum = s;
    }
    out.value = sum + comp;
    return out;
}

} // namespace nabla
