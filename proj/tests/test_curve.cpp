#include <cmath>

#include "doctest.h"
#include "isotorus/curve.hpp"
#include "isotorus/interp.hpp"
#include "isotorus/surface.hpp"

using namespace isotorus;

namespace {
constexpr double kPi = 3.14159265358979323846;
const double kTTilde = 0.62831853071795865; // pi r / 2 at r = 0.4

SurfaceProfile standard14() { return build_standard_torus({1.0, 0.4}); }
} // namespace

TEST_CASE("the bifurcation circle is a constant solution") {
    SurfaceProfile s = standard14();
    CurveState init{0.0, kTTilde, 0.5 * kPi, 0.0};
    Trajectory tr = integrate_arclength(s, init, -1.0, 20.0, 1e-10);
    for (const CurveState& st : tr.states) {
        CHECK(std::abs(st.t - kTTilde) < 1e-9);
        CHECK(std::abs(st.sigma - 0.5 * kPi) < 1e-9);
    }
    CHECK(classify_curve(tr) == CurveClass::Circle);

    // first integral on the circle: f(t~) - h~ * F(t~)
    CHECK(tr.first_integral_ref == doctest::Approx(1.7883185307179586).epsilon(1e-12));
}

TEST_CASE("vertical geodesics advance t by arc length") {
    SurfaceProfile s = standard14();
    CurveState init{0.5, -0.2, 0.0, 0.0};
    Trajectory tr = integrate_arclength(s, init, 0.0, 0.4, 1e-10);
    CHECK(std::abs(tr.back().t - 0.2) < 1e-9);
    CHECK(std::abs(tr.back().theta - 0.5) < 1e-12);
    CHECK(classify_curve(tr) == CurveClass::VerticalGeodesic);
    CHECK(std::abs(tr.first_integral_ref) < 1e-14);

    // crossing the identification records a wrap and folds t
    Trajectory wrapped = integrate_arclength(s, {0.0, 0.5, 0.0, 0.0}, 0.0, 1.5, 1e-10);
    bool has_wrap = false;
    for (const CurveEvent& ev : wrapped.events)
        if (ev.kind == EventKind::Wrap) has_wrap = true;
    CHECK(has_wrap);
    CHECK(std::abs(wrapped.back().t - (0.5 + 1.5 - 2.0 * s.t0())) < 1e-9);
}

TEST_CASE("first integral is conserved along generic trajectories") {
    SurfaceProfile s = standard14();
    double h = -1.0095286693366629; // h(0.7) + 0.05
    CurveState init{0.0, 0.7, 0.5 * kPi, 0.0};
    Trajectory tr = integrate_arclength(s, init, h, 20.0, 1e-10);
    CHECK(tr.first_integral_drift
          <= 1e-9 * (1.0 + std::abs(tr.first_integral_ref)));
}

TEST_CASE("graph form reproduces the circle and detects breakdown") {
    SurfaceProfile s = standard14();
    Trajectory circle = integrate_graph(s, kTTilde, -1.0, 2.0 * kPi, 1e-12);
    CHECK(std::abs(circle.back().t - kTTilde) < 1e-10);
    CHECK(std::abs(circle.back().sigma - 0.5 * kPi) < 1e-10);
    CHECK(circle.graph_form);

    // a disk-bounding curve leaves graph form
    CHECK_THROWS_AS(integrate_graph(s, 0.3, 3.16, 2.0 * kPi, 1e-10), GraphFormBreakdown);
}

TEST_CASE("arc-length and graph integrators agree on a shared unduloid arc") {
    SurfaceProfile s = standard14();
    double T = kTTilde + 0.05;
    CurveIntegOptions opt;
    opt.max_step = 0.0025; // keep interpolation error below the 1e-8 budget
    Trajectory graph = integrate_graph(s, T, -1.0, 2.0, 1e-11, opt);

    Trajectory arc = integrate_arclength(s, {0.0, T, 0.5 * kPi, 0.0}, -1.0,
                                         graph.back().s + 0.5, 1e-11, opt);
    std::vector<double> th, tt;
    for (const CurveState& st : arc.states) {
        if (!th.empty() && st.theta <= th.back()) continue;
        th.push_back(st.theta);
        tt.push_back(st.t);
    }
    PchipInterpolant t_of_theta(th, tt);
    for (const CurveState& st : graph.states) {
        if (st.theta < th.front() || st.theta > th.back()) continue;
        CHECK(std::abs(t_of_theta(st.theta) - st.t) < 1e-8);
    }
}

TEST_CASE("trajectories are symmetric under theta -> -theta") {
    SurfaceProfile s = standard14();
    double T = kTTilde + 0.06;
    CurveIntegOptions opt;
    opt.max_step = 0.02;
    Trajectory fwd = integrate_graph(s, T, -1.02, 2.5, 1e-11, opt);
    Trajectory bwd = integrate_graph(s, T, -1.02, -2.5, 1e-11, opt);

    std::vector<double> th, tt;
    for (const CurveState& st : fwd.states) {
        if (!th.empty() && st.theta <= th.back()) continue;
        th.push_back(st.theta);
        tt.push_back(st.t);
    }
    PchipInterpolant t_fwd(th, tt);
    for (const CurveState& st : bwd.states) {
        double mirrored = -st.theta;
        if (mirrored < th.front() || mirrored > th.back()) continue;
        CHECK(std::abs(t_fwd(mirrored) - st.t) < 1e-8);
    }
}

TEST_CASE("classification from extremum events") {
    SurfaceProfile s = standard14();

    // nodoid: high curvature from a maximum at T = 0.3
    Trajectory nod = integrate_arclength(s, {0.0, 0.3, 0.5 * kPi, 0.0}, 3.16, 6.0, 1e-10);
    CHECK(classify_curve(nod) == CurveClass::Nodoid);

    // unduloid: graph-form curve near the bifurcation circle
    Trajectory und = integrate_graph(s, kTTilde + 0.05, -1.0, 4.0 * kPi, 1e-10);
    CHECK(classify_curve(und) == CurveClass::Unduloid);

    // stability under tolerance refinement (x100)
    Trajectory nod2 = integrate_arclength(s, {0.0, 0.3, 0.5 * kPi, 0.0}, 3.16, 6.0, 1e-12);
    CHECK(classify_curve(nod2) == CurveClass::Nodoid);
}

TEST_CASE("half period near the bifurcation") {
    SurfaceProfile s = standard14();
    double dT = 0.02;
    HalfPeriodResult hp = half_period(s, kTTilde + dT, -1.0, 1e-12);
    CHECK(hp.kind == CurveClass::Unduloid);
    // delta_theta = pi + theta''(t~) dT^2 / 2 + O(dT^3), theta'' = 32.929454
    double predicted = kPi + 0.5 * 32.929454246611765 * dT * dT;
    CHECK(std::abs(hp.delta_theta - predicted) < 5e-4);

    // numerical consistency under tolerance refinement, away from the
    // ill-conditioned bifurcation limit
    HalfPeriodResult ha = half_period(s, kTTilde + 0.1, -1.0, 1e-12);
    HalfPeriodResult hb = half_period(s, kTTilde + 0.1, -1.0, 1e-10);
    CHECK(std::abs(ha.delta_theta - hb.delta_theta) < 1e-9);

    // nodoid branch: arc-length fallback fires
    HalfPeriodResult nod = half_period(s, 0.3, 3.16, 1e-10);
    CHECK(nod.kind == CurveClass::Nodoid);
    CHECK(std::sin(nod.end.sigma) < -0.99);
}
