#include <cmath>

#include "doctest.h"
#include "isotorus/interp.hpp"
#include "isotorus/ode.hpp"
#include "isotorus/quadrature.hpp"
#include "isotorus/rootfind.hpp"

using namespace isotorus;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("bracketed root finding") {
    auto f = [](double x) { return std::cos(x); };
    auto brs = scan_brackets(f, 0.0, 2.0, 64);
    REQUIRE(brs.size() == 1);
    double root = solve_bracketed(f, brs[0], 1e-14);
    CHECK(std::abs(root - 0.5 * kPi) < 1e-12);

    auto maybe = find_root_scan([](double x) { return x * x - 2.0; }, 0.0, 2.0);
    REQUIRE(maybe.has_value());
    CHECK(std::abs(*maybe - std::sqrt(2.0)) < 1e-11);

    CHECK_FALSE(find_root_scan([](double x) { return 1.0 + x * x; }, -1.0, 1.0).has_value());

    auto br = expand_bracket([](double x) { return x - 0.7; }, 0.5, 0.01, 0.0, 2.0);
    REQUIRE(br.has_value());
    CHECK(solve_bracketed([](double x) { return x - 0.7; }, *br, 1e-14)
          == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("adaptive quadrature") {
    double s = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, kPi);
    CHECK(std::abs(s - 2.0) < 1e-12);

    double e = integrate_adaptive([](double x) { return std::exp(x); }, -1.0, 3.0, 1e-13);
    CHECK(std::abs(e - (std::exp(3.0) - std::exp(-1.0))) < 1e-11);

    // oscillatory
    double o = integrate_adaptive([](double x) { return std::cos(40.0 * x); }, 0.0, 1.0, 1e-12);
    CHECK(std::abs(o - std::sin(40.0) / 40.0) < 1e-12);
}

TEST_CASE("dopri5 against closed forms") {
    // y' = -y
    Dopri5<1> decay([](double, const StateVec<1>& y, StateVec<1>& dy) { dy[0] = -y[0]; },
                    OdeOptions{1e-12, 1e-12, 1e-3, 1e100});
    decay.init(0.0, {1.0});
    decay.advance_to(2.0);
    CHECK(std::abs(decay.y()[0] - std::exp(-2.0)) < 1e-11);

    // harmonic oscillator over many periods
    Dopri5<2> osc([](double, const StateVec<2>& y, StateVec<2>& dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
    }, OdeOptions{1e-12, 1e-12, 1e-3, 1e100});
    osc.init(0.0, {1.0, 0.0});
    osc.advance_to(10.0 * kPi);
    CHECK(std::abs(osc.y()[0] - 1.0) < 1e-9);
    CHECK(std::abs(osc.y()[1]) < 1e-9);

    // dense output inside a step
    Dopri5<1> lin([](double x, const StateVec<1>&, StateVec<1>& dy) { dy[0] = std::cos(x); },
                  OdeOptions{1e-10, 1e-10, 0.25, 0.5});
    lin.init(0.0, {0.0});
    while (lin.x() < 1.0) {
        auto& dense = lin.step_clamped(1.0);
        for (int j = 1; j < 8; ++j) {
            double x = dense.x0 + dense.h * j / 8.0;
            CHECK(std::abs(dense.eval(x)[0] - std::sin(x)) < 1e-9);
        }
    }

    // backward integration
    Dopri5<1> back([](double, const StateVec<1>& y, StateVec<1>& dy) { dy[0] = y[0]; },
                   OdeOptions{1e-12, 1e-12, 1e-3, 1e100});
    back.init(0.0, {1.0}, -1.0);
    back.advance_to(-1.0);
    CHECK(std::abs(back.y()[0] - std::exp(-1.0)) < 1e-11);
}

TEST_CASE("pchip is shape preserving and exactly reaches nodes") {
    std::vector<double> x = {0.0, 0.5, 1.0, 2.0, 3.0};
    std::vector<double> y = {0.0, 0.2, 1.0, 1.1, 4.0};
    PchipInterpolant p(x, y);
    for (size_t i = 0; i < x.size(); ++i)
        CHECK(p(x[i]) == doctest::Approx(y[i]).epsilon(1e-14));
    // monotone data: interpolant stays within neighbor bounds
    for (int j = 0; j <= 400; ++j) {
        double xq = 3.0 * j / 400.0;
        double v = p(xq);
        CHECK(v >= -1e-12);
        CHECK(v <= 4.0 + 1e-12);
    }
}
