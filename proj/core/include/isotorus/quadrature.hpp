#pragma once

#include <functional>

namespace isotorus {

// Adaptive Gauss-Kronrod (7,15) quadrature on [a, b]. Recursively splits
// until the per-panel Kronrod error estimate meets the mixed tolerance
//   |err| <= abs_tol + rel_tol * |integral|.
// The integrand must be finite on [a, b]; discontinuities of higher
// derivatives are handled by the subdivision, but callers should split at
// known breakpoints for full accuracy.
double integrate_adaptive(const std::function<double(double)>& f,
                          double a, double b,
                          double rel_tol = 1e-12, double abs_tol = 1e-14,
                          int max_depth = 40);

} // namespace isotorus
