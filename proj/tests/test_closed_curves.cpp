#include <cmath>

#include "doctest.h"
#include "isotorus/closed_curves.hpp"
#include "isotorus/surface.hpp"

using namespace isotorus;

namespace {
constexpr double kPi = 3.14159265358979323846;
const double kTTilde = 0.62831853071795865;
const double kHTilde = -1.0;

SurfaceProfile standard14() { return build_standard_torus({1.0, 0.4}); }
} // namespace

TEST_CASE("period map at the bifurcation point") {
    SurfaceProfile s = standard14();
    CHECK(std::abs(period_map(s, kTTilde, kHTilde) - 0.5 * kPi) < 1e-10);

    // gradient vanishes: central differences, step 1e-4
    double d = 1e-4;
    double FT = (period_map(s, kTTilde + d, kHTilde) - period_map(s, kTTilde - d, kHTilde))
              / (2.0 * d);
    double Fh = (period_map(s, kTTilde, kHTilde + d) - period_map(s, kTTilde, kHTilde - d))
              / (2.0 * d);
    CHECK(std::sqrt(FT * FT + Fh * Fh) <= 1e-6);
}

TEST_CASE("closed-form Taylor data of the shooting map") {
    SurfaceProfile s = standard14();
    TaylorCoefficients tc = analytic_taylor(s);

    // (5 a^2 + 9 r^2) / r^4 evaluated independently
    double a = 1.0, r = 0.4;
    double cond = (5.0 * a * a + 9.0 * r * r) / (r * r * r * r);
    CHECK(tc.condition_value == doctest::Approx(cond).epsilon(1e-8));
    CHECK(tc.condition_value == doctest::Approx(251.5625).epsilon(1e-8));

    CHECK(tc.rho == doctest::Approx(-19.634954084936208).epsilon(1e-10));
    CHECK(tc.sigma_TT_pi == 0.0);
    CHECK(tc.sigma_Th_pi == doctest::Approx(0.5 * tc.rho).epsilon(1e-14));
    CHECK(tc.sigma_hh_pi == doctest::Approx(tc.rho).epsilon(1e-14)); // f(t~) = 1
    CHECK(tc.sigma_TTT_pi == doctest::Approx(98.788362739835295).epsilon(1e-10));

    // h_o''(t~) = (9 r^2 + 5 a^2) / (12 a^3 r^2)
    CHECK(tc.h_o_second == doctest::Approx(3.3541666666666667).epsilon(1e-10));
}

TEST_CASE("finite differences of the period map reproduce the Hessian") {
    SurfaceProfile s = standard14();
    TaylorCoefficients tc = analytic_taylor(s);
    double d = 1e-3;
    auto F = [&](double T, double h) { return period_map(s, T, h); };

    double FTT = (F(kTTilde + d, kHTilde) - 2.0 * F(kTTilde, kHTilde) + F(kTTilde - d, kHTilde))
               / (d * d);
    double Fhh = (F(kTTilde, kHTilde + d) - 2.0 * F(kTTilde, kHTilde) + F(kTTilde, kHTilde - d))
               / (d * d);
    double FTh = (F(kTTilde + d, kHTilde + d) - F(kTTilde + d, kHTilde - d)
                  - F(kTTilde - d, kHTilde + d) + F(kTTilde - d, kHTilde - d))
               / (4.0 * d * d);

    CHECK(std::abs(FTT - tc.sigma_TT_pi) <= 1e-3 * std::abs(tc.rho));
    CHECK(FTh == doctest::Approx(tc.sigma_Th_pi).epsilon(1e-3));
    CHECK(Fhh == doctest::Approx(tc.sigma_hh_pi).epsilon(1e-3));
}

TEST_CASE("finite-difference third derivative matches the closed form") {
    SurfaceProfile s = standard14();
    TaylorCoefficients tc = analytic_taylor(s);
    auto F = [&](double T) { return period_map(s, T, kHTilde); };
    auto stencil = [&](double d) {
        return (F(kTTilde + 2.0 * d) - 2.0 * F(kTTilde + d) + 2.0 * F(kTTilde - d)
                - F(kTTilde - 2.0 * d)) / (2.0 * d * d * d);
    };
    double d = 2e-2;
    double fd = (4.0 * stencil(0.5 * d) - stencil(d)) / 3.0; // one Richardson level
    CHECK(fd == doctest::Approx(tc.sigma_TTT_pi).epsilon(1e-3));
}

TEST_CASE("unduloid branch tracing") {
    SurfaceProfile s = standard14();
    UnduloidBranch branch = trace_unduloid_branch(s);
    REQUIRE(branch.samples.size() >= 16);
    CHECK(branch.T_min() < kTTilde - 0.05);
    CHECK(branch.T_max() > kTTilde + 0.05);

    for (const BranchSample& b : branch.samples) {
        CHECK(std::abs(b.period_check) <= 1e-10);
        CHECK(b.closure_residual <= 1e-8);
        CHECK(b.first_integral_drift <= 1e-9);
    }

    // h_o'(t~) = 0 and h_o''(t~) from re-solved samples
    double d = 1e-3;
    ClosedCurve up = closed_unduloid_at(s, branch, kTTilde + d);
    ClosedCurve dn = closed_unduloid_at(s, branch, kTTilde - d);
    double slope = (up.h - dn.h) / (2.0 * d);
    CHECK(std::abs(slope) <= 1e-4);
    double second = (up.h - 2.0 * kHTilde + dn.h) / (d * d);
    CHECK(second == doctest::Approx(3.3541666666666667).epsilon(1e-2));

    // the rejected circle branch has tangent (1, -1/f^2) = (1, -1)
    double circ_slope = (s.fp(kTTilde + d) / s.f(kTTilde + d)
                         - s.fp(kTTilde - d) / s.f(kTTilde - d)) / (2.0 * d);
    CHECK(circ_slope == doctest::Approx(-1.0).epsilon(1e-5));

    // second derivative of enclosed area at t~: (a^2 - 9 r^2) pi / (6 r^2)
    double A0 = 2.0 * kPi * s.antiderivative(kTTilde);
    double app = (up.area_theta - 2.0 * A0 + dn.area_theta) / (d * d);
    CHECK(app == doctest::Approx(-1.4398966328953219).epsilon(1e-3));

    // first derivative of area vanishes at t~
    CHECK(std::abs((up.area_theta - dn.area_theta) / (2.0 * d)) < 1e-3);
}

TEST_CASE("branch samples straddle D = 1 and close as k = 1 unduloids") {
    SurfaceProfile s = standard14();
    UnduloidBranch branch = trace_unduloid_branch(s);
    ClosedCurve c = closed_unduloid_at(s, branch, kTTilde + 0.05);
    CHECK(c.kind == CurveClass::Unduloid);
    CHECK(c.k == 1);
    CHECK(c.closure_residual <= 1e-8);

    bool above = false, below = false;
    for (const CurveState& st : c.trajectory.states) {
        double D = s.discriminant(st.t);
        if (D > 1.0 + 1e-12) above = true;
        if (D < 1.0 - 1e-12) below = true;
    }
    CHECK(above);
    CHECK(below);
}

TEST_CASE("period derivative along the branch") {
    SurfaceProfile s = standard14();
    UnduloidBranch branch = trace_unduloid_branch(s);

    CHECK(period_derivative(s, branch, kTTilde + 0.05) > 0.0);
    // vanishes at the bifurcation point
    CHECK(std::abs(period_derivative(s, branch, kTTilde)) < 1e-3);
    // condition value positive <=> growing period for T above t~
    TaylorCoefficients tc = analytic_taylor(s);
    CHECK(tc.condition_value > 0.0);
}

TEST_CASE("symmetric nodoids close on the vertical line of their maximum") {
    SurfaceProfile s = standard14();
    auto disk = find_symmetric_nodoid(s, 0.3);
    REQUIRE(disk.has_value());
    CHECK(disk->kind == CurveClass::Nodoid);
    CHECK(disk->h > 0.0);
    CHECK(disk->closure_residual <= 1e-8);
    CHECK(disk->t_min == doctest::Approx(-0.3).epsilon(1e-8));

    // first-integral closure value h = f(T)/int_0^T f is the oracle
    CHECK(disk->h == doctest::Approx(3.1600953167551970).epsilon(1e-6));
}

TEST_CASE("small disks follow the geodesic-circle expansion") {
    SurfaceProfile s = standard14();
    auto disk = find_symmetric_nodoid(s, 0.05);
    REQUIRE(disk.has_value());
    double A = std::abs(disk->area_theta);
    double P = disk->length;
    // P^2 = 4 pi A - K(0) A^2 + o(A^2)
    double K0 = s.K(0.0);
    double coeff = (4.0 * kPi * A - P * P) / (A * A);
    CHECK(coeff == doctest::Approx(K0).epsilon(0.02));
}

TEST_CASE("taylor data refuses a discontinuous bifurcation parallel") {
    SurfaceProfile s = build_sphere_hyperbolic({1.0, kPi / 6.0, 0.578});
    CHECK_THROWS_AS(analytic_taylor(s), NumericalError);
}
