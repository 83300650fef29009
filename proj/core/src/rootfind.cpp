#include "isotorus/rootfind.hpp"

#include <algorithm>

namespace isotorus {

std::vector<Bracket> scan_brackets(const std::function<double(double)>& f,
                                   double a, double b, int n) {
    std::vector<Bracket> out;
    if (n < 2) n = 2;
    double x_prev = a;
    double f_prev = f(a);
    for (int i = 1; i <= n; ++i) {
        double x = a + (b - a) * static_cast<double>(i) / n;
        double fx = f(x);
        if (f_prev == 0.0) {
            out.push_back({x_prev, x_prev, 0.0, 0.0});
        } else if (std::signbit(f_prev) != std::signbit(fx)) {
            out.push_back({x_prev, x, f_prev, fx});
        }
        x_prev = x;
        f_prev = fx;
    }
    if (f_prev == 0.0) out.push_back({b, b, 0.0, 0.0});
    return out;
}

double solve_bracketed(const std::function<double(double)>& f,
                       Bracket br, double xtol, int max_iter) {
    if (br.lo == br.hi) return br.lo;
    double lo = br.lo, hi = br.hi, flo = br.f_lo, fhi = br.f_hi;
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi))
        throw NumericalError("rootfind", "solve_bracketed called without a sign change");

    for (int it = 0; it < max_iter; ++it) {
        if (hi - lo <= xtol) break;
        // Secant candidate, falling back to the midpoint whenever the secant
        // step leaves the bracket or stalls.
        double mid = 0.5 * (lo + hi);
        double x = mid;
        double denom = fhi - flo;
        if (denom != 0.0) {
            double sec = lo - flo * (hi - lo) / denom;
            double margin = 0.01 * (hi - lo);
            if (sec > lo + margin && sec < hi - margin) x = sec;
        }
        double fx = f(x);
        if (fx == 0.0) return x;
        if (std::signbit(fx) == std::signbit(flo)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
    }
    // Return the endpoint with the smaller residual.
    return std::abs(flo) <= std::abs(fhi) ? lo : hi;
}

std::optional<double> find_root_scan(const std::function<double(double)>& f,
                                     double a, double b, int n_scan,
                                     double xtol) {
    auto brs = scan_brackets(f, a, b, n_scan);
    if (brs.empty()) return std::nullopt;
    return solve_bracketed(f, brs.front(), xtol);
}

std::optional<Bracket> expand_bracket(const std::function<double(double)>& f,
                                      double seed, double initial_halfwidth,
                                      double lo_limit, double hi_limit,
                                      int max_doublings) {
    double w = initial_halfwidth;
    double f_seed = f(seed);
    if (f_seed == 0.0) return Bracket{seed, seed, 0.0, 0.0};
    for (int i = 0; i < max_doublings; ++i) {
        double lo = std::max(lo_limit, seed - w);
        double hi = std::min(hi_limit, seed + w);
        double f_lo = f(lo);
        if (std::signbit(f_lo) != std::signbit(f_seed))
            return Bracket{lo, seed, f_lo, f_seed};
        double f_hi = f(hi);
        if (std::signbit(f_hi) != std::signbit(f_seed))
            return Bracket{seed, hi, f_seed, f_hi};
        if (lo == lo_limit && hi == hi_limit) break;
        w *= 2.0;
    }
    return std::nullopt;
}

} // namespace isotorus
