#pragma once

#include <functional>
#include <vector>

namespace nabla {

/// Gauss-Legendre rule mapped to [0, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point rule; nodes from Newton iteration on the Legendre recurrence.
GaussRule gauss_legendre(int n);

/// The 32-point rule, exact for polynomials up to degree 63.
const GaussRule& gauss_legendre_32();

struct QuadratureResult {
    double value = 0.0;
    int panels = 1;
};

/// Integral over [0, 1]. With `single_panel` one 32-point pass is used;
/// otherwise panels are halved until successive estimates agree within
/// rel_tol. Throws InconclusiveSearch when they never do.
QuadratureResult integrate_unit(const std::function<double(double)>& f, bool single_panel,
                                double rel_tol = 1e-10, int max_levels = 12);

} // namespace nabla
