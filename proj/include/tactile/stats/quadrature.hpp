#pragma once

#include <functional>

namespace tactile::stats {

// Adaptive 7/15-point Gauss-Kronrod quadrature on [a, b]. Intervals are
// bisected until the Kronrod-Gauss difference on each piece is below its
// share of abs_tol, or max_depth is reached.
double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-12,
                 int max_depth = 40);

}  // namespace tactile::stats
