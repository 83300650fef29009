#include "isotorus/closed_curves.hpp"

#include <algorithm>
#include <cmath>

#include "isotorus/rootfind.hpp"

namespace isotorus {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

int interior_extrema_count(const Trajectory& tr) {
    int n = 0;
    for (const CurveEvent& ev : tr.events)
        if (ev.kind == EventKind::TMax || ev.kind == EventKind::TMin) {
            double th = tr.states[ev.state_index].theta;
            if (th > 1e-9 && th < kTwoPi - 1e-9) ++n;
        }
    return n;
}
} // namespace

double UnduloidBranch::h_at(double T) const {
    if (samples.empty()) throw NumericalError("closed_curves", "empty branch");
    if (T <= samples.front().T) return samples.front().h;
    if (T >= samples.back().T) return samples.back().h;
    for (size_t i = 1; i < samples.size(); ++i)
        if (T <= samples[i].T) {
            double w = (T - samples[i - 1].T) / (samples[i].T - samples[i - 1].T);
            return samples[i - 1].h + w * (samples[i].h - samples[i - 1].h);
        }
    return samples.back().h;
}

double UnduloidBranch::area_at(double T) const {
    if (samples.empty()) throw NumericalError("closed_curves", "empty branch");
    if (T <= samples.front().T) return samples.front().area_theta;
    if (T >= samples.back().T) return samples.back().area_theta;
    for (size_t i = 1; i < samples.size(); ++i)
        if (T <= samples[i].T) {
            double w = (T - samples[i - 1].T) / (samples[i].T - samples[i - 1].T);
            return samples[i - 1].area_theta
                 + w * (samples[i].area_theta - samples[i - 1].area_theta);
        }
    return samples.back().area_theta;
}

double period_map(const SurfaceProfile& surf, double T, double h) {
    Trajectory tr = integrate_graph(surf, T, h, kPi, 1e-12);
    return tr.back().sigma;
}

TaylorCoefficients analytic_taylor(const SurfaceProfile& surf) {
    const CriticalPoints& cp = surf.critical_points();
    if (!cp.t_tilde)
        throw NumericalError("closed_curves", "no parallel with D = 1 (t_tilde absent)");
    double tt = *cp.t_tilde;

    for (double tj : surf.joints()) {
        if (std::abs(std::abs(tj) - tt) > 1e-9) continue;
        double lo = surf.K(std::nextafter(std::abs(tj), 0.0));
        double hi = surf.K(std::nextafter(std::abs(tj), surf.t0()));
        if (std::abs(lo - hi) > 1e-9 * std::max(1.0, std::abs(lo)))
            throw NumericalError("closed_curves",
                                 "hypothesis violated: K discontinuous at t_tilde");
    }

    TaylorCoefficients tc;
    tc.t_tilde = tt;
    tc.f_tilde = surf.f(tt);
    tc.h_tilde = surf.fp(tt) / tc.f_tilde;
    double Kt = surf.K(tt);
    double Kp = surf.Kp(tt);
    double Kpp = surf.Kpp(tt);
    if (!(Kp < 0.0))
        throw NumericalError("closed_curves",
                             "hypothesis violated: K not strictly decreasing at t_tilde");
    double f = tc.f_tilde;
    tc.rho = kPi * f * f * f * Kp;
    tc.sigma_TT_pi = 0.0;
    tc.sigma_Th_pi = 0.5 * tc.rho;
    tc.sigma_hh_pi = tc.rho * f * f;
    tc.condition_value = 3.0 * Kt * (1.0 - f)
                       + 3.0 * f * f * (tc.h_tilde * Kp - Kpp)
                       + 5.0 * f * f * f * f * Kp * Kp;
    tc.sigma_TTT_pi = kPi / (8.0 * f) * tc.condition_value;
    tc.h_o_second = -tc.sigma_TTT_pi / (1.5 * tc.rho);
    return tc;
}

namespace {

// Solve F(T, h) = pi/2 in h near `seed`, keeping clear of the circle root
// h_c(T) = f'(T)/f(T). Returns nullopt when no unduloid root brackets.
std::optional<double> solve_branch_point(const SurfaceProfile& surf, double T,
                                         double seed, double circle_h) {
    auto g = [&](double h) { return period_map(surf, T, h) - 0.5 * kPi; };
    double gap = std::abs(seed - circle_h);
    if (gap == 0.0) return std::nullopt;
    double w = 0.05 * gap;
    for (int grow = 0; grow < 8; ++grow) {
        double lo = seed - w, hi = seed + w;
        // never cross more than 60% of the way toward the circle root
        if (circle_h < seed) lo = std::max(lo, seed - 0.6 * gap);
        else hi = std::min(hi, seed + 0.6 * gap);
        double glo, ghi;
        try {
            glo = g(lo);
            ghi = g(hi);
        } catch (const GraphFormBreakdown&) {
            return std::nullopt;
        }
        if (std::signbit(glo) != std::signbit(ghi)) {
            double root = solve_bracketed(g, {lo, hi, glo, ghi}, 1e-14);
            return root;
        }
        w *= 2.0;
    }
    return std::nullopt;
}

std::optional<BranchSample> accept_branch_sample(const SurfaceProfile& surf, double T,
                                                 double h, const BranchOptions& opt) {
    Trajectory full;
    try {
        full = integrate_graph(surf, T, h, kTwoPi, opt.tol);
    } catch (const GraphFormBreakdown&) {
        return std::nullopt;
    }
    BranchSample s;
    s.T = T;
    s.h = h;
    s.period_check = period_map(surf, T, h) - 0.5 * kPi;
    s.closure_residual = std::max(std::abs(full.back().t - T),
                                  std::abs(full.back().sigma - 0.5 * kPi));
    if (s.closure_residual > opt.closure_tol) return std::nullopt;
    if (classify_curve(full) != CurveClass::Unduloid) return std::nullopt;
    if (interior_extrema_count(full) != 1) return std::nullopt; // k = 1 only
    s.length = full.arc_length;
    s.area_theta = full.area_theta;
    s.first_integral_drift = full.first_integral_drift;
    double lo = T, hi = T;
    for (const CurveState& st : full.states) {
        lo = std::min(lo, st.t);
        hi = std::max(hi, st.t);
    }
    s.t_other = (std::abs(hi - T) > std::abs(lo - T)) ? hi : lo;
    return s;
}

} // namespace

UnduloidBranch trace_unduloid_branch(const SurfaceProfile& surf, const BranchOptions& opt) {
    TaylorCoefficients tc = analytic_taylor(surf);
    UnduloidBranch branch;
    branch.t_tilde = tc.t_tilde;
    branch.h_tilde = tc.h_tilde;

    // The bifurcation point itself: the circle of revolution at t_tilde.
    BranchSample center;
    center.T = tc.t_tilde;
    center.h = tc.h_tilde;
    center.period_check = period_map(surf, tc.t_tilde, tc.h_tilde) - 0.5 * kPi;
    center.length = kTwoPi * tc.f_tilde;
    center.area_theta = kTwoPi * surf.antiderivative(tc.t_tilde);
    center.t_other = tc.t_tilde;
    branch.samples.push_back(center);

    double step0 = opt.initial_step > 0.0 ? opt.initial_step : 1e-3 * tc.t_tilde;
    for (int side = 0; side < 2; ++side) {
        double dir = side == 0 ? 1.0 : -1.0;
        if (dir < 0.0 && !opt.two_sided) break;
        double step = step0;
        double T_prev = tc.t_tilde;
        double prev_h = tc.h_tilde;
        double prev_prev_T = tc.t_tilde;
        double prev_prev_h = tc.h_tilde;
        bool have_two = false;
        while (std::abs(T_prev + dir * step - tc.t_tilde) <= opt.T_range + 1e-15) {
            double T = T_prev + dir * step;
            if (T <= 0.0 || T >= surf.t0()) break;
            double dT = T - tc.t_tilde;
            double seed;
            if (!have_two)
                seed = tc.h_tilde + 0.5 * tc.h_o_second * dT * dT;
            else
                seed = prev_h + (prev_h - prev_prev_h) / (T_prev - prev_prev_T) * (T - T_prev);
            double circle_h = surf.fp(T) / surf.f(T);
            auto root = solve_branch_point(surf, T, seed, circle_h);
            std::optional<BranchSample> sample;
            if (root) sample = accept_branch_sample(surf, T, *root, opt);
            if (!sample) {
                step *= 0.5;
                if (step < 1e-3 * step0) break; // branch left the neighborhood
                continue;
            }
            branch.samples.push_back(*sample);
            prev_prev_T = T_prev;
            prev_prev_h = prev_h;
            T_prev = T;
            prev_h = sample->h;
            have_two = true;
            if (step < 4.0 * step0) step *= 2.0;
        }
    }

    std::sort(branch.samples.begin(), branch.samples.end(),
              [](const BranchSample& a, const BranchSample& b) { return a.T < b.T; });
    if (branch.samples.size() < 3)
        throw NumericalError("closed_curves", "unduloid branch continuation failed near t_tilde");
    return branch;
}

double period_derivative(const SurfaceProfile& surf, const UnduloidBranch& branch,
                         double T, double fd_step) {
    double h = branch.h_at(T);
    double p_plus = 2.0 * half_period(surf, T + fd_step, h, 1e-12).delta_theta;
    double p_minus = 2.0 * half_period(surf, T - fd_step, h, 1e-12).delta_theta;
    return (p_plus - p_minus) / (2.0 * fd_step);
}

std::optional<ClosedCurve> find_symmetric_nodoid(const SurfaceProfile& surf, double T,
                                                 const NodoidSearchOptions& opt) {
    if (!(T > 0.0 && T < surf.t0()))
        throw ConfigError("find_symmetric_nodoid: T must lie in (0, t0)");

    CurveIntegOptions iopt;
    iopt.stop_at_first_extremum = true;
    const double s_budget = 16.0 * (surf.t0() + surf.f(0.0));

    // First t-extremum after the maximum. The curve closes when the
    // extremum lands back on theta = 0 with t = -T; the t-residual is the
    // well-conditioned component (the theta offset degenerates for small
    // disks), so the bisection runs on it and the theta offset is verified
    // afterwards as the closure residual.
    struct Landing {
        double theta;
        double t_residual;
        Trajectory tr;
    };
    auto landing = [&](double h) -> std::optional<Landing> {
        CurveState init{0.0, T, 0.5 * kPi, 0.0};
        Trajectory tr;
        try {
            tr = integrate_arclength(surf, init, h, s_budget, opt.tol, iopt);
        } catch (const NumericalError&) {
            return std::nullopt;
        }
        for (const CurveEvent& ev : tr.events)
            if (ev.kind == EventKind::TMax || ev.kind == EventKind::TMin) {
                const CurveState& st = tr.states[ev.state_index];
                return Landing{st.theta, st.t + T, std::move(tr)};
            }
        return std::nullopt;
    };

    // Bracket around the first-integral closure value h = f(T) / int_0^T f,
    // the curvature of the symmetric curve.
    double seed = surf.f(T) / surf.antiderivative(T);
    auto at_seed = landing(seed);
    if (!at_seed) return std::nullopt;
    double g_seed = at_seed->t_residual;

    double lo = seed, hi = seed, g_lo = g_seed, g_hi = g_seed;
    bool bracketed = false;
    double w = 1e-4 * std::abs(seed);
    for (int grow = 0; grow < 30 && !bracketed; ++grow) {
        double cand = seed - w;
        if (cand > 0.0) {
            if (auto r = landing(cand)) {
                if (std::signbit(r->t_residual) != std::signbit(g_seed)) {
                    lo = cand;
                    g_lo = r->t_residual;
                    hi = seed;
                    g_hi = g_seed;
                    bracketed = true;
                    break;
                }
            }
        }
        cand = seed + w;
        if (auto r = landing(cand)) {
            if (std::signbit(r->t_residual) != std::signbit(g_seed)) {
                lo = seed;
                g_lo = g_seed;
                hi = cand;
                g_hi = r->t_residual;
                bracketed = true;
                break;
            }
        }
        w *= 2.0;
    }
    if (!bracketed) return std::nullopt;

    auto g = [&](double h) {
        auto r = landing(h);
        if (!r)
            throw NumericalError("closed_curves",
                                 "nodoid closure function undefined inside bracket");
        return r->t_residual;
    };
    double h_star = solve_bracketed(g, {std::min(lo, hi), std::max(lo, hi),
                                        lo <= hi ? g_lo : g_hi,
                                        lo <= hi ? g_hi : g_lo},
                                    1e-15 * std::max(1.0, std::abs(seed)));

    auto final_run = landing(h_star);
    if (!final_run) return std::nullopt;
    double theta_min = final_run->theta;

    ClosedCurve c;
    c.trajectory = std::move(final_run->tr);
    c.trajectory_is_half = true;
    c.kind = classify_curve(c.trajectory);
    c.h = h_star;
    c.t_max = T;
    c.t_min = c.trajectory.states.back().t;
    c.period = 0.0;
    c.k = 0;
    c.length = 2.0 * c.trajectory.states.back().s;
    c.area_theta = 2.0 * c.trajectory.area_theta;
    c.closure_residual = std::max(std::abs(theta_min), std::abs(c.t_min + T));
    if (c.closure_residual > 1e-8) return std::nullopt;
    return c;
}

ClosedCurve closed_unduloid_at(const SurfaceProfile& surf, const UnduloidBranch& branch,
                               double T, double tol) {
    auto g = [&](double h) { return period_map(surf, T, h) - 0.5 * kPi; };
    double h = branch.h_at(T);
    // Re-polish h so the sample is self-contained at this exact T.
    double circle_h = surf.fp(T) / surf.f(T);
    if (std::abs(T - branch.t_tilde) > 1e-12) {
        double gap = std::abs(h - circle_h);
        double w = std::max(1e-12, 0.05 * gap);
        auto br = expand_bracket(g, h, w, h - 0.5 * gap, h + 0.5 * gap);
        if (br) h = solve_bracketed(g, *br, 1e-14);
    }

    Trajectory full = integrate_graph(surf, T, h, kTwoPi, tol);
    ClosedCurve c;
    c.kind = classify_curve(full);
    c.h = h;
    c.t_max = T;
    c.t_min = T;
    for (const CurveState& st : full.states) {
        c.t_max = std::max(c.t_max, st.t);
        c.t_min = std::min(c.t_min, st.t);
    }
    c.period = kTwoPi;
    c.k = 1;
    c.length = full.arc_length;
    c.area_theta = full.area_theta;
    c.closure_residual = std::max(std::abs(full.back().t - full.front().t),
                                  std::abs(full.back().sigma - full.front().sigma));
    c.trajectory = std::move(full);
    return c;
}

ClosedCurve make_circle_curve(const SurfaceProfile& surf, double t) {
    MetricSample m = surf.metric(t);
    ClosedCurve c;
    c.kind = CurveClass::Circle;
    c.h = m.h;
    c.t_max = c.t_min = t;
    c.period = kTwoPi;
    c.k = 1;
    c.length = m.L;
    c.area_theta = kTwoPi * surf.antiderivative(t);
    c.closure_residual = 0.0;
    return c;
}

ClosedCurve make_vertical_geodesic(const SurfaceProfile& surf) {
    ClosedCurve c;
    c.kind = CurveClass::VerticalGeodesic;
    c.h = 0.0;
    c.t_max = surf.t0();
    c.t_min = -surf.t0();
    c.period = 0.0;
    c.k = 0;
    c.length = 2.0 * surf.t0();
    c.area_theta = 0.0;
    c.closure_residual = 0.0;
    return c;
}

} // namespace isotorus
