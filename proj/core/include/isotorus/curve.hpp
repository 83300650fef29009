#pragma once

#include <string>
#include <vector>

#include "isotorus/errors.hpp"
#include "isotorus/surface.hpp"

namespace isotorus {

// State along a constant geodesic curvature curve. sigma is the oriented
// angle between d/dt and the tangent; the curvature h is measured w.r.t.
// N = (cos(sigma)/f) d/dtheta - sin(sigma) d/dt.
//
// theta and sigma are stored unwrapped (accumulated over the real line);
// wrap events mark theta crossings of 2*pi*k, and t is folded back through
// the identification t = +-t0 when a trajectory crosses it.
struct CurveState {
    double theta = 0.0;
    double t = 0.0;
    double sigma = 0.0;
    double s = 0.0; // arc length from the initial point
};

enum class EventKind { TMax, TMin, VerticalTangent, SegmentJoint, Wrap };

struct CurveEvent {
    std::size_t state_index;
    EventKind kind;
};

enum class CurveClass { Circle, VerticalGeodesic, Nodoid, Unduloid };

std::string to_string(CurveClass c);
std::string to_string(EventKind k);

struct Trajectory {
    double h = 0.0;
    std::vector<CurveState> states;
    std::vector<CurveEvent> events;
    double first_integral_ref = 0.0;   // value at the initial state
    double first_integral_drift = 0.0; // max |FI - ref| observed along states
    double arc_length = 0.0;
    double area_theta = 0.0; // integral of F(t) dtheta along the trajectory
    bool graph_form = false;

    const CurveState& front() const { return states.front(); }
    const CurveState& back() const { return states.back(); }
};

struct CurveIntegOptions {
    double max_step = 1e100; // in the independent variable
    long max_steps = 4000000;
    bool stop_at_first_extremum = false; // halt once a t-extremum is located
};

// Graph-form integration left the sin(sigma) > 0 regime (nodoid behavior).
class GraphFormBreakdown : public NumericalError {
public:
    explicit GraphFormBreakdown(double theta)
        : NumericalError("curve", "graph form breakdown at theta = " + std::to_string(theta)),
          theta(theta) {}
    double theta;
};

// Arc-length integration of
//   dtheta/ds = sin(sigma)/f,  dt/ds = cos(sigma),  dsigma/ds = h - (f'/f) sin(sigma)
// with exact stops at segment joints and the +-t0 identification, and
// recorded events for t-extrema, vertical tangents, joints and theta wraps.
Trajectory integrate_arclength(const SurfaceProfile& surf, const CurveState& init,
                               double h, double s_max, double tol,
                               const CurveIntegOptions& opt = {});

// Graph-form integration of t(theta), sigma(theta) from t(0) = T,
// sigma(0) = pi/2:
//   dt/dtheta = f cot(sigma),  dsigma/dtheta = h f / sin(sigma) - f'
// Aborts with GraphFormBreakdown when |sin(sigma)| < 1e-6. theta_end may be
// negative (integrates in -theta).
Trajectory integrate_graph(const SurfaceProfile& surf, double T, double h,
                           double theta_end, double tol,
                           const CurveIntegOptions& opt = {});

// f(t) sin(sigma) - h * integral_0^t f, constant along any solution.
double first_integral(const SurfaceProfile& surf, const CurveState& st, double h);

// Classification per the sign of sin(sigma) at the critical point following
// a strict t-maximum; constant-t and constant-theta trajectories short-circuit
// to Circle / VerticalGeodesic.
CurveClass classify_curve(const Trajectory& tr);

struct HalfPeriodResult {
    double delta_theta = 0.0; // theta-advance from the t-extremum at theta=0
    CurveClass kind = CurveClass::Unduloid;
    CurveState end;           // state at the located critical point
};

// theta-distance from the t-extremum at (theta=0, t=T, sigma=pi/2) to the
// next critical point of t. Uses graph form while it holds, arc-length form
// when the curve leaves graph form. The full period is 2*delta_theta.
HalfPeriodResult half_period(const SurfaceProfile& surf, double T, double h,
                             double tol, double theta_budget = 64.0 * 3.14159265358979323846);

} // namespace isotorus
