#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "isotorus/errors.hpp"

namespace isotorus {

// Closed-form warp segments. Two analytic families cover every surface in
// scope and compose into custom profiles:
//   Cosine: f(t) = p0 + p1 * cos(p2 * t + p3)
//   Cosh:   f(t) = p0 * cosh(p1 + p2 * t)
enum class SegmentKind { Cosine, Cosh };

struct Segment {
    double t_lo = 0.0;
    double t_hi = 0.0;
    SegmentKind kind = SegmentKind::Cosine;
    std::array<double, 4> p{};

    double f(double t) const;
    double fp(double t) const;
    double fpp(double t) const;
    double fppp(double t) const;
    double fpppp(double t) const;
    // Antiderivative of f with a segment-local integration constant.
    double antiderivative(double t) const;
};

// Pointwise metric data of a parallel S^1 x {t}:
//   h = f'/f   geodesic curvature w.r.t. -d/dt
//   L = 2*pi*f parallel length
//   D = (f')^2 - f*f''  stability discriminant, equal to L^2*(K+h^2)/(4*pi^2)
struct MetricSample {
    double t;
    double f, fp, fpp;
    double K, h, L, D;
};

// Abscissae delimiting the stable-annulus windows, reported on the positive
// side (the profile is symmetric, so the sign is a convention):
//   t_c     innermost abscissa with D <= 0 (boundary of the K+h^2 <= 0 band)
//   t_tilde outermost abscissa with D >= 1 (unduloid bifurcation parallel)
// Either may be absent on surfaces that never reach the level.
struct CriticalPoints {
    std::optional<double> t_tilde;
    std::optional<double> t_c;
    double t0 = 0.0;
};

// The rotationally symmetric torus S^1 x [-t0, t0] with the boundary circles
// identified, carried by its warp function f. Construction validates the
// standing hypotheses: f positive, C^1 and piecewise C^2, even, strictly
// decreasing on (0, t0) with f'(t0) = 0, and Gauss curvature K = -f''/f
// nonincreasing in |t| with K(0) > 0 > K(t0).
//
// Instances are immutable after construction; every evaluation is pure and
// safe to share across threads.
class SurfaceProfile {
public:
    SurfaceProfile(std::vector<Segment> segments, std::string name);

    const std::string& name() const { return name_; }
    double t0() const { return t0_; }

    double f(double t) const;
    double fp(double t) const;
    // Second and higher derivatives are taken one-sided toward t = 0 at
    // segment joints (K is only piecewise continuous).
    double fpp(double t) const;
    double K(double t) const { return -fpp(t) / f(t); }
    double Kp(double t) const;
    double Kpp(double t) const;
    double discriminant(double t) const; // D = (f')^2 - f f''
    double antiderivative(double t) const; // integral of f from 0 to t

    MetricSample metric(double t) const;
    const CriticalPoints& critical_points() const { return critical_; }
    double total_area() const { return total_area_; } // beta = 2 pi * int f

    const std::vector<Segment>& segments() const { return segments_; }
    // Interior breakpoints (joint abscissae, excluding +-t0), ascending.
    const std::vector<double>& joints() const { return joints_; }

private:
    const Segment& segment_toward_zero(double t) const;
    void validate() const;
    void locate_critical_points();

    std::vector<Segment> segments_;
    std::vector<double> joints_;
    std::vector<double> antiderivative_offset_;
    std::string name_;
    double t0_ = 0.0;
    double total_area_ = 0.0;
    CriticalPoints critical_;
};

struct StandardTorusParams {
    double a = 0.0;
    double r = 0.0;
};

struct SphereHyperbolicParams {
    double a = 0.0;
    double t_star = 0.0;
    double b = 0.0;
};

// Derived constants of the sphere-plus-hyperbolic-annuli family:
//   c^2 = cos^2(a t*)/a^2 - sin^2(a t*)/b^2
//   d   = b t* + acosh(cos(a t*) / (a c))
struct SphereHyperbolicDerived {
    double c = 0.0;
    double d = 0.0;
    double t0 = 0.0; // d / b
};

SphereHyperbolicDerived sphere_hyperbolic_constants(const SphereHyperbolicParams& p);

// f(t) = a + r cos(t/r) on [-pi r, pi r]; rejects a <= r (cusped torus).
SurfaceProfile build_standard_torus(const StandardTorusParams& p);

// Sphere of curvature a^2 with polar caps above |t| = t* replaced by
// hyperbolic annuli of curvature -b^2, C^1-glued; rejects b <= a tan(a t*).
SurfaceProfile build_sphere_hyperbolic(const SphereHyperbolicParams& p);

SurfaceProfile build_custom(std::vector<Segment> segments, std::string name);

} // namespace isotorus
