#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "isotorus/errors.hpp"

namespace isotorus {

template <int N>
using StateVec = std::array<double, N>;

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    double initial_step = 1e-4;
    double max_step = std::numeric_limits<double>::infinity();
};

// Quartic interpolant over one accepted Dormand-Prince step.
template <int N>
struct DenseStep {
    double x0 = 0.0;
    double h = 0.0;
    StateVec<N> r1{}, r2{}, r3{}, r4{}, r5{};

    StateVec<N> eval(double x) const {
        const double th = (x - x0) / h;
        const double th1 = 1.0 - th;
        StateVec<N> y;
        for (int i = 0; i < N; ++i)
            y[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
        return y;
    }
};

// Adaptive embedded Dormand-Prince 5(4) with FSAL and dense output.
// Steps may be taken in either direction; the direction is fixed by the sign
// of the initial step (or the first advance_to target).
template <int N>
class Dopri5 {
public:
    using Rhs = std::function<void(double, const StateVec<N>&, StateVec<N>&)>;

    Dopri5(Rhs rhs, OdeOptions opt = {}) : rhs_(std::move(rhs)), opt_(opt) {}

    void init(double x0, const StateVec<N>& y0, double direction = 1.0) {
        x_ = x0;
        y_ = y0;
        dir_ = direction >= 0.0 ? 1.0 : -1.0;
        rhs_(x_, y_, k1_);
        h_ = dir_ * std::min(opt_.initial_step, opt_.max_step);
        n_steps_ = 0;
    }

    double x() const { return x_; }
    const StateVec<N>& y() const { return y_; }
    const StateVec<N>& dydx() const { return k1_; }
    const DenseStep<N>& last_step() const { return dense_; }
    long steps_taken() const { return n_steps_; }

    struct Checkpoint {
        double x, h, dir;
        StateVec<N> y, k1;
    };
    Checkpoint snapshot() const { return {x_, h_, dir_, y_, k1_}; }
    void restore(const Checkpoint& c) {
        x_ = c.x;
        h_ = c.h;
        dir_ = c.dir;
        y_ = c.y;
        k1_ = c.k1;
    }

    // Replace the state in place (identification wraps); re-evaluates k1.
    void reset_state(double x0, const StateVec<N>& y0) {
        x_ = x0;
        y_ = y0;
        rhs_(x_, y_, k1_);
    }

    void set_direction(double direction) {
        dir_ = direction >= 0.0 ? 1.0 : -1.0;
        if (dir_ * h_ < 0.0) h_ = -h_;
    }

    // Take one error-controlled step, at most `limit` past nothing (callers
    // clamp via advance_to). Returns the dense interpolant of the step.
    const DenseStep<N>& step() { return step_clamped(std::numeric_limits<double>::infinity()); }

    // Step, but never beyond x_limit (in the direction of travel).
    const DenseStep<N>& step_clamped(double x_limit) {
        const double scale = std::max(std::abs(x_), 1.0);
        StateVec<N> k2, k3, k4, k5, k6, k7, ytmp, y5, err;
        for (int attempt = 0; attempt < 64; ++attempt) {
            double h = h_;
            bool clamped = false;
            if (std::isfinite(x_limit) && dir_ * (x_ + h - x_limit) > 0.0) {
                h = x_limit - x_;
                clamped = true;
            }
            if (std::abs(h) < 1e-14 * scale && !clamped)
                throw NumericalError("ode", "step size underflow at x = " + std::to_string(x_));

            stages(h, k2, k3, k4, k5, k6, k7, ytmp, y5);
            double err_norm = 0.0;
            for (int i = 0; i < N; ++i) {
                err[i] = h * (e1 * k1_[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i]
                              + e6 * k6[i] + e7 * k7[i]);
                double sk = opt_.abs_tol
                          + opt_.rel_tol * std::max(std::abs(y_[i]), std::abs(y5[i]));
                double r = err[i] / sk;
                err_norm += r * r;
            }
            err_norm = std::sqrt(err_norm / N);

            if (err_norm <= 1.0 || std::abs(h) < 4e-14 * scale) {
                fill_dense(h, k3, k4, k5, k6, k7, y5);
                x_ += h;
                y_ = y5;
                k1_ = k7; // FSAL
                double fac = err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
                fac = std::min(5.0, std::max(0.2, fac));
                double hnew = (clamped ? h_ : h) * fac;
                if (std::abs(hnew) > opt_.max_step) hnew = dir_ * opt_.max_step;
                h_ = hnew;
                ++n_steps_;
                return dense_;
            }
            double fac = std::max(0.1, 0.9 * std::pow(err_norm, -0.2));
            h_ = h * fac;
        }
        throw NumericalError("ode", "repeated step rejection at x = " + std::to_string(x_));
    }

    // Integrate exactly to x_target (respecting the current direction).
    void advance_to(double x_target) {
        if (x_target == x_) return;
        dir_ = x_target > x_ ? 1.0 : -1.0;
        if (dir_ * h_ < 0.0) h_ = -h_;
        const double scale = std::max(1.0, std::abs(x_target));
        while (dir_ * (x_target - x_) > 1e-15 * scale)
            step_clamped(x_target);
    }

private:
    void stages(double h, StateVec<N>& k2, StateVec<N>& k3, StateVec<N>& k4,
                StateVec<N>& k5, StateVec<N>& k6, StateVec<N>& k7,
                StateVec<N>& ytmp, StateVec<N>& y5) {
        for (int i = 0; i < N; ++i) ytmp[i] = y_[i] + h * a21 * k1_[i];
        rhs_(x_ + c2 * h, ytmp, k2);
        for (int i = 0; i < N; ++i) ytmp[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2[i]);
        rhs_(x_ + c3 * h, ytmp, k3);
        for (int i = 0; i < N; ++i)
            ytmp[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2[i] + a43 * k3[i]);
        rhs_(x_ + c4 * h, ytmp, k4);
        for (int i = 0; i < N; ++i)
            ytmp[i] = y_[i] + h * (a51 * k1_[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs_(x_ + c5 * h, ytmp, k5);
        for (int i = 0; i < N; ++i)
            ytmp[i] = y_[i]
                    + h * (a61 * k1_[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i]
                           + a65 * k5[i]);
        rhs_(x_ + h, ytmp, k6);
        for (int i = 0; i < N; ++i)
            y5[i] = y_[i]
                  + h * (a71 * k1_[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i]
                         + a76 * k6[i]);
        rhs_(x_ + h, y5, k7);
    }

    void fill_dense(double h, const StateVec<N>& k3, const StateVec<N>& k4,
                    const StateVec<N>& k5, const StateVec<N>& k6,
                    const StateVec<N>& k7, const StateVec<N>& y5) {
        dense_.x0 = x_;
        dense_.h = h;
        for (int i = 0; i < N; ++i) {
            double dy = y5[i] - y_[i];
            dense_.r1[i] = y_[i];
            dense_.r2[i] = dy;
            dense_.r3[i] = h * k1_[i] - dy;
            dense_.r4[i] = dy - h * k7[i] - dense_.r3[i];
            dense_.r5[i] = h * (d1 * k1_[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i]
                                + d6 * k6[i] + d7 * k7[i]);
        }
    }

    // Dormand-Prince tableau.
    static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0,
                            c5 = 8.0 / 9.0;
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                            a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                            a65 = -5103.0 / 18656.0;
    static constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0,
                            a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                            a76 = 11.0 / 84.0;
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0,
                            e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                            e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
    static constexpr double d1 = -12715105075.0 / 11282082432.0,
                            d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0,
                            d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0,
                            d7 = 69997945.0 / 29380423.0;

    Rhs rhs_;
    OdeOptions opt_;
    double x_ = 0.0;
    double h_ = 1e-4;
    double dir_ = 1.0;
    StateVec<N> y_{};
    StateVec<N> k1_{};
    DenseStep<N> dense_{};
    long n_steps_ = 0;
};

} // namespace isotorus
