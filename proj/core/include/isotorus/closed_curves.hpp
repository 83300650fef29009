#pragma once

#include <optional>
#include <vector>

#include "isotorus/curve.hpp"
#include "isotorus/surface.hpp"

namespace isotorus {

// Quadratic/cubic data of the shooting map F(T, h) = sigma(pi, T, h) at the
// bifurcation parallel t_tilde, evaluated from closed-form derivatives of K:
//   rho          = pi f^3 K'
//   Hessian      = (0, rho/2; rho/2, rho f^2)
//   sigma_TTT_pi = pi/(8 f) * condition_value
//   condition_value = 3 K (1 - f) + 3 f^2 (h K' - K'') + 5 f^4 K'^2
// condition_value > 0 iff the period of nearby closed unduloids grows with
// the maximum height.
struct TaylorCoefficients {
    double t_tilde = 0.0;
    double h_tilde = 0.0;
    double f_tilde = 0.0;
    double rho = 0.0;
    double sigma_TT_pi = 0.0;
    double sigma_Th_pi = 0.0;
    double sigma_hh_pi = 0.0;
    double sigma_TTT_pi = 0.0;
    double condition_value = 0.0;
    double h_o_second = 0.0; // d^2 h_o / dT^2 at t_tilde
};

struct BranchSample {
    double T = 0.0;            // extremum height of the closed unduloid
    double h = 0.0;            // solved curvature h_o(T)
    double period_check = 0.0; // F(T, h) - pi/2 residual
    double length = 0.0;       // closed-curve length
    double area_theta = 0.0;   // integral of F(t(theta)) over one period
    double t_other = 0.0;      // the opposite extremum height
    double closure_residual = 0.0;
    double first_integral_drift = 0.0;
};

// The closed-unduloid family through (t_tilde, h_tilde), sampled on both
// sides of the bifurcation and ascending in T. Samples with T < t_tilde
// start the shooting at the curve minimum; they re-cover the same curves.
struct UnduloidBranch {
    std::vector<BranchSample> samples;
    double t_tilde = 0.0;
    double h_tilde = 0.0;

    double h_at(double T) const;    // piecewise-linear in T
    double area_at(double T) const; // piecewise-linear in T
    double T_min() const { return samples.front().T; }
    double T_max() const { return samples.back().T; }
};

struct ClosedCurve {
    CurveClass kind = CurveClass::Circle;
    double h = 0.0;
    double t_max = 0.0;
    double t_min = 0.0;
    double period = 0.0; // theta-period, 2*pi/k for closed unduloids
    int k = 0;
    double length = 0.0;
    double area_theta = 0.0; // contour integral of F(t) dtheta, full curve
    double closure_residual = 0.0;
    Trajectory trajectory;        // full curve, or the max-to-min half
    bool trajectory_is_half = false;
};

// sigma(pi, T, h) from graph-form integration at tol 1e-12. A return of
// pi/2 means the curve through (T, h) closes with period 2*pi.
double period_map(const SurfaceProfile& surf, double T, double h);

// Closed-form Taylor data at t_tilde; throws NumericalError when t_tilde is
// absent or sits on a K-discontinuity (the smoothness hypothesis fails).
TaylorCoefficients analytic_taylor(const SurfaceProfile& surf);

struct BranchOptions {
    double T_range = 0.12;     // half-width of the traced T-interval
    double initial_step = 0.0; // 0: use 1e-3 * t_tilde
    double tol = 1e-12;        // graph integration tolerance
    double closure_tol = 1e-8;
    bool two_sided = true;
};

// Natural continuation of F(T, h) = pi/2 in h along increasing |T - t_tilde|,
// seeded by the Taylor model and the previous samples; the circle branch
// h_c(T) = f'(T)/f(T) is excluded by construction and every accepted sample
// re-integrates over a full period and classifies as an unduloid.
UnduloidBranch trace_unduloid_branch(const SurfaceProfile& surf,
                                     const BranchOptions& opt = {});

// d(full period)/dT at fixed curvature h = h_o(T), by central differences of
// half_period. Vanishes at T = t_tilde.
double period_derivative(const SurfaceProfile& surf, const UnduloidBranch& branch,
                         double T, double fd_step = 1e-4);

struct NodoidSearchOptions {
    double tol = 1e-11;
    double theta_closure_tol = 1e-9;
};

// Disk-bounding curve with maximum height T, symmetric about the longest
// parallel: solves for the curvature h making the t-minimum land on the
// vertical line theta = 0 with t_min = -T (bisection on the theta offset of
// the minimum). Returns nullopt when no bracket exists at this height.
std::optional<ClosedCurve> find_symmetric_nodoid(const SurfaceProfile& surf, double T,
                                                 const NodoidSearchOptions& opt = {});

// Rebuild the full closed unduloid at branch parameter T (nearest sample
// re-solved), with its trajectory over one period.
ClosedCurve closed_unduloid_at(const SurfaceProfile& surf, const UnduloidBranch& branch,
                               double T, double tol = 1e-12);

// Parallels and vertical geodesics as degenerate closed curves (analytic
// trajectories; used by the spectrum module).
ClosedCurve make_circle_curve(const SurfaceProfile& surf, double t);
ClosedCurve make_vertical_geodesic(const SurfaceProfile& surf);

} // namespace isotorus
