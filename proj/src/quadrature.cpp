#include "nabla/quadrature.hpp"

#include "nabla/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace nabla {

GaussRule gauss_legendre(int n) {
    if (n < 1)
        throw DomainError("Gauss-Legendre rule needs at least one node");
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1)
                p0 = 1.0, p1 = x;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        if (n == 1)
            dp = 1.0;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Map from [-1, 1] to [0, 1].
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = 0.5 * (1.0 - x);
        rule.nodes[hi] = 0.5 * (1.0 + x);
        rule.weights[lo] = rule.weights[hi] = 0.5 * w;
    }
    if (n == 1) {
        rule.nodes[0] = 0.5;
        rule.weights[0] = 1.0;
    }
    return rule;
}

const GaussRule& gauss_legendre_32() {
    static const GaussRule rule = gauss_legendre(32);
    return rule;
}

namespace {

struct Estimate {
    double value;
    double magnitude; // integral of |f|, sets the absolute floor
};

Estimate composite(const std::function<double(double)>& f, int panels) {
    const auto& rule = gauss_legendre_32();
    const double h = 1.0 / panels;
    double sum = 0.0, mag = 0.0;
    for (int p = 0; p < panels; ++p) {
        double part = 0.0, part_mag = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double v = f((p + rule.nodes[i]) * h);
            part += rule.weights[i] * v;
            part_mag += rule.weights[i] * std::abs(v);
        }
        sum += part * h;
        mag += part_mag * h;
    }
    return {sum, mag};
}

} // namespace

QuadratureResult integrate_unit(const std::function<double(double)>& f, bool single_panel, double rel_tol,
                                int max_levels) {
    double prev = composite(f, 1).value;
    if (single_panel)
        return {prev, 1};
    for (int level = 1; level <= max_levels; ++level) {
        const int panels = 1 << level;
        const auto cur = composite(f, panels);
        const double floor = 1e-14 * cur.magnitude;
        if (std::abs(cur.value - prev) <= std::max(rel_tol * std::abs(cur.value), floor))
            return {cur.value, panels};
        prev = cur.value;
    }
    throw InconclusiveSearch("quadrature did not converge after " + std::to_string(1 << max_levels) + " panels");
}

} // namespace nabla
