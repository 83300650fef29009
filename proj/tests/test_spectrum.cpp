#include <cmath>

#include "doctest.h"
#include "isotorus/closed_curves.hpp"
#include "isotorus/spectrum.hpp"
#include "isotorus/surface.hpp"

using namespace isotorus;

namespace {
constexpr double kPi = 3.14159265358979323846;
const double kTTilde = 0.62831853071795865;

SurfaceProfile standard14() { return build_standard_torus({1.0, 0.4}); }
} // namespace

TEST_CASE("sturm bisection on a known tridiagonal") {
    // discrete Dirichlet Laplacian on 8 points: eigenvalues 2 - 2 cos(k pi / 9)
    std::vector<double> d(8, 2.0), e(7, -1.0);
    auto eig = tridiag_lowest_eigenvalues(d, e, 3);
    for (int k = 1; k <= 3; ++k)
        CHECK(eig[k - 1] == doctest::Approx(2.0 - 2.0 * std::cos(k * kPi / 9.0)).epsilon(1e-12));
}

TEST_CASE("circle spectrum matches the constant-coefficient closed form") {
    SurfaceProfile s = standard14();
    ClosedCurve circle = make_circle_curve(s, 0.0);
    PotentialProfile p = potential_along(s, circle);
    SpectrumResult r = spectrum(p, BoundaryCondition::Periodic, 5, 2048);

    // lambda in {(2 pi k / L)^2 - q}: q = 1.7857142857, L = 2 pi f(0)
    CHECK(std::abs(r.eigenvalues[0] - (-1.7857142857142857)) < 1e-6);
    CHECK(std::abs(r.eigenvalues[1] - (-1.2755102040816327)) < 1e-6);
    CHECK(std::abs(r.eigenvalues[2] - (-1.2755102040816327)) < 1e-6);
    CHECK(std::abs(r.eigenvalues[3] - 0.25510204081632653) < 1e-6);
    CHECK(std::abs(r.eigenvalues[4] - 0.25510204081632653) < 1e-6);

    // degenerate pairs split below 1e-6
    CHECK(std::abs(r.eigenvalues[1] - r.eigenvalues[2]) < 1e-6);
    CHECK(std::abs(r.eigenvalues[3] - r.eigenvalues[4]) < 1e-6);

    // ascending
    for (size_t i = 1; i < r.eigenvalues.size(); ++i)
        CHECK(r.eigenvalues[i] >= r.eigenvalues[i - 1] - 1e-12);
}

TEST_CASE("lambda_1 of parallels is -(K + h^2)") {
    SurfaceProfile s = standard14();
    for (double t : {0.1, 0.3, 0.5, 0.7, 0.9, 1.1}) {
        ClosedCurve circle = make_circle_curve(s, t);
        PotentialProfile p = potential_along(s, circle);
        SpectrumResult r = spectrum(p, BoundaryCondition::Periodic, 2, 1024);
        MetricSample m = s.metric(t);
        CHECK(r.eigenvalues[0] == doctest::Approx(-(m.K + m.h * m.h)).epsilon(1e-8));
    }

    // at t_c the first eigenvalue vanishes
    ClosedCurve at_tc = make_circle_curve(s, *s.critical_points().t_c);
    PotentialProfile p = potential_along(s, at_tc);
    SpectrumResult r = spectrum(p, BoundaryCondition::Periodic, 1, 1024);
    CHECK(std::abs(r.eigenvalues[0]) < 1e-8);
}

TEST_CASE("vertical geodesics carry a zero first eigenvalue") {
    SurfaceProfile s = standard14();
    ClosedCurve vg = make_vertical_geodesic(s);
    PotentialProfile p = potential_along(s, vg);
    SpectrumResult r = spectrum(p, BoundaryCondition::Periodic, 2, 2048);
    CHECK(std::abs(r.eigenvalues[0]) < 1e-6);
}

TEST_CASE("closed unduloid eigenvalue structure") {
    SurfaceProfile s = standard14();
    UnduloidBranch branch = trace_unduloid_branch(s);
    ClosedCurve c = closed_unduloid_at(s, branch, kTTilde + 0.06);
    PotentialProfile p = potential_along(s, c);

    SpectrumResult full = spectrum(p, BoundaryCondition::Periodic, 3, 2048);
    CHECK(full.eigenvalues[0] < 0.0);
    CHECK(std::abs(full.eigenvalues[1]) <= 1e-4); // lambda_2 = 0 on stable unduloids

    auto [nn, dd] = fundamental_piece_spectra(p);
    CHECK(std::abs(full.eigenvalues[0] - nn.eigenvalues[0]) <= 1e-5);
    CHECK(std::abs(dd.eigenvalues[0]) <= 1e-5); // lambda_1^D(piece) = 0

    // sign(lambda_2^N) = sign(period derivative), both positive here
    CHECK(nn.eigenvalues[1] > 0.0);
    CHECK(period_derivative(s, branch, kTTilde + 0.06) > 0.0);
}

TEST_CASE("grid refinement stability") {
    SurfaceProfile s = standard14();
    ClosedCurve circle = make_circle_curve(s, 0.45);
    PotentialProfile p = potential_along(s, circle);
    SpectrumResult a = spectrum(p, BoundaryCondition::Periodic, 4, 1024);
    SpectrumResult b = spectrum(p, BoundaryCondition::Periodic, 4, 2048);
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(a.eigenvalues[i] - b.eigenvalues[i]) <= 1e-5);
}

TEST_CASE("index form on circles") {
    SurfaceProfile s = standard14();
    ClosedCurve circle = make_circle_curve(s, 0.0);
    PotentialProfile p = potential_along(s, circle);

    double L = circle.length;
    std::vector<double> u(p.nodes.size());
    for (size_t i = 0; i < u.size(); ++i)
        u[i] = std::sin(2.0 * kPi * p.nodes[i] / L);
    double I = index_form(p, u);
    // closed form: (L/2) ((2 pi / L)^2 - q)
    CHECK(I == doctest::Approx(-5.6099868814103451).epsilon(1e-5));

    // nonzero-mean functions are rejected
    std::vector<double> c(p.nodes.size(), 1.0);
    CHECK_THROWS_AS(index_form(p, c), ConfigError);

    // zero function is fine and gives zero
    std::vector<double> z(p.nodes.size(), 0.0);
    CHECK(index_form(p, z) == 0.0);
}

TEST_CASE("two unstable components glue to an unstable union") {
    SurfaceProfile s = standard14();
    ClosedCurve c1 = make_circle_curve(s, 0.0);
    ClosedCurve c2 = make_circle_curve(s, 0.3);
    PotentialProfile p1 = potential_along(s, c1);
    PotentialProfile p2 = potential_along(s, c2);

    // first eigenfunctions of constant-q circles are constants; pick
    // alpha L1 + L2 = 0 for zero total mean
    double alpha = -c2.length / c1.length;
    std::vector<double> u1(p1.nodes.size(), alpha);
    std::vector<double> u2(p2.nodes.size(), 1.0);
    double I = index_form_raw(p1, u1) + index_form_raw(p2, u2);
    CHECK(I < 0.0);
}
