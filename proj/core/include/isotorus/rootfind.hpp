#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "isotorus/errors.hpp"

namespace isotorus {

struct Bracket {
    double lo, hi;
    double f_lo, f_hi;
};

// Scan [a, b] with n equally spaced samples and collect every sign-change
// bracket. Exact zeros are returned as degenerate brackets.
std::vector<Bracket> scan_brackets(const std::function<double(double)>& f,
                                   double a, double b, int n);

// Bisection followed by secant polish inside a sign-change bracket.
// Converges to |hi - lo| <= xtol (absolute, in the abscissa).
double solve_bracketed(const std::function<double(double)>& f,
                       Bracket br, double xtol = 1e-12, int max_iter = 200);

// Convenience: bracket by scanning then solve; std::nullopt when no sign
// change exists on [a, b].
std::optional<double> find_root_scan(const std::function<double(double)>& f,
                                     double a, double b, int n_scan = 512,
                                     double xtol = 1e-12);

// Expand a bracket around `seed` by doubling the half-width until the sign
// changes or the window [lo_limit, hi_limit] is exhausted.
std::optional<Bracket> expand_bracket(const std::function<double(double)>& f,
                                      double seed, double initial_halfwidth,
                                      double lo_limit, double hi_limit,
                                      int max_doublings = 40);

} // namespace isotorus
