#include "isotorus/curve.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

#include "isotorus/ode.hpp"
#include "isotorus/rootfind.hpp"

namespace isotorus {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kArmEps = 1e-11;
constexpr double kGraphGate = 1e-6;
constexpr int kDenseSamples = 24;

double fold_t(double t, double t0) {
    if (t >= -t0 && t <= t0) return t;
    double span = 2.0 * t0;
    double u = std::fmod(t + t0, span);
    if (u < 0.0) u += span;
    return u - t0;
}

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

// Sign-change watcher for one scalar function of the state. Watchers are
// armed only once the function is clearly away from zero, so a trajectory
// that starts exactly on an event does not fire it spuriously.
struct Watcher {
    enum What { CosSigma, SinSigma, TBreak } what;
    double aux = 0.0;   // breakpoint abscissa for TBreak
    bool wrap_t = false; // breakpoint is the +-t0 identification
    bool armed = false;
    int last_sign = 0;

    double value(const CurveState& st) const {
        switch (what) {
            case CosSigma: return std::cos(st.sigma);
            case SinSigma: return std::sin(st.sigma);
            case TBreak: return st.t - aux;
        }
        return 0.0;
    }

    void refresh(const CurveState& st) {
        double v = value(st);
        if (!armed) {
            if (std::abs(v) > kArmEps) {
                armed = true;
                last_sign = sign_of(v);
            }
        } else {
            int s = sign_of(v);
            if (s != 0) last_sign = s;
        }
    }
};

struct Hit {
    double x;
    int watcher; // -1 for a theta-wrap level crossing
    double theta_level = 0.0;
};

// Both drivers integrate a 4-component state and share the event/joint
// machinery; `Layout` maps the physical quantities into the state vector.
struct ArcLayout {
    static CurveState to_state(double x, const StateVec<4>& y) {
        return {y[0], y[1], y[2], x};
    }
};
struct GraphLayout {
    static CurveState to_state(double x, const StateVec<4>& y) {
        return {x, y[0], y[1], y[2]};
    }
};

template <class Layout>
class CurveDriver {
public:
    CurveDriver(const SurfaceProfile& surf, double h, double tol,
                const CurveIntegOptions& opt, typename Dopri5<4>::Rhs rhs)
        : surf_(surf), opt_(opt), integ_(std::move(rhs), make_ode_options(tol, opt)) {
        tr_.h = h;
        // Joints and the identification are breakpoints of f''; integration
        // stops exactly there so each step sees a smooth right-hand side.
        for (double tj : surf.joints())
            watchers_.push_back({Watcher::TBreak, tj, false});
        watchers_.push_back({Watcher::TBreak, surf.t0(), true});
        watchers_.push_back({Watcher::TBreak, -surf.t0(), true});
    }

    void add_sigma_watchers(bool vertical_tangents) {
        watchers_.insert(watchers_.begin(), {Watcher::CosSigma, 0.0, false});
        if (vertical_tangents)
            watchers_.insert(watchers_.begin() + 1, {Watcher::SinSigma, 0.0, false});
    }

    Trajectory run(double x0, const StateVec<4>& y0, double x_end, double h_curv) {
        const double dir = x_end >= x0 ? 1.0 : -1.0;
        integ_.init(x0, y0, dir);
        append_state();
        tr_.first_integral_ref = first_integral(surf_, tr_.states.front(), h_curv);
        for (auto& w : watchers_) w.refresh(tr_.states.back());

        double pending_stop = 0.0;
        bool has_pending = false;
        std::vector<Hit> pending_hits;
        long iter_guard = 0;

        while (dir * (x_end - integ_.x()) > 1e-14 * std::max(1.0, std::abs(x_end))) {
            if (++iter_guard > opt_.max_steps)
                throw NumericalError("curve", "step budget exhausted at x = "
                                                  + std::to_string(integ_.x()));
            auto snap = integ_.snapshot();
            double limit = has_pending ? pending_stop : x_end;
            integ_.step_clamped(limit);

            if (!has_pending) {
                auto hits = earliest_crossing(snap.x, integ_.x(), dir);
                if (!hits.empty()
                    && dir * (integ_.x() - hits.front().x)
                           > 1e-13 * std::max(1.0, std::abs(integ_.x()))) {
                    integ_.restore(snap);
                    pending_stop = hits.front().x;
                    pending_hits = hits;
                    has_pending = true;
                    continue;
                }
                if (!hits.empty()) {
                    pending_hits = hits;
                    has_pending = true;
                    pending_stop = integ_.x();
                }
            }

            append_state();

            bool stop_requested = false;
            if (has_pending
                && std::abs(integ_.x() - pending_stop)
                       <= 1e-12 * std::max(1.0, std::abs(pending_stop))) {
                stop_requested = handle_hits(pending_hits, dir);
                integ_.set_direction(dir); // extremum polish may step backward
                has_pending = false;
                pending_hits.clear();
            }
            for (auto& w : watchers_) w.refresh(tr_.states.back());
            if (stop_requested) break;
        }

        tr_.arc_length = std::abs(tr_.states.back().s - tr_.states.front().s);
        tr_.area_theta = integ_.y()[3];
        return std::move(tr_);
    }

protected:
    static OdeOptions make_ode_options(double tol, const CurveIntegOptions& opt) {
        if (!(tol > 0.0)) throw ConfigError("curve: tolerance must be positive");
        OdeOptions o;
        o.rel_tol = tol;
        o.abs_tol = tol;
        o.initial_step = 1e-4;
        o.max_step = opt.max_step;
        return o;
    }

    void append_state() {
        tr_.states.push_back(Layout::to_state(integ_.x(), integ_.y()));
        double fi = first_integral(surf_, tr_.states.back(), tr_.h);
        if (tr_.states.size() > 1)
            tr_.first_integral_drift =
                std::max(tr_.first_integral_drift, std::abs(fi - tr_.first_integral_ref));
    }

    std::vector<Hit> earliest_crossing(double x_from, double x_to, double dir) {
        const auto& dense = integ_.last_step();
        std::array<CurveState, kDenseSamples + 1> samples;
        for (int j = 0; j <= kDenseSamples; ++j) {
            double x = x_from + (x_to - x_from) * j / kDenseSamples;
            samples[j] = Layout::to_state(x, dense.eval(x));
        }
        std::vector<Hit> hits;
        auto add_hit = [&](double x, int widx, double level) {
            hits.push_back({x, widx, level});
        };

        for (size_t wi = 0; wi < watchers_.size(); ++wi) {
            Watcher& w = watchers_[wi];
            if (!w.armed) continue;
            for (int j = 1; j <= kDenseSamples; ++j) {
                double v = w.value(samples[j]);
                if (v != 0.0 && sign_of(v) != w.last_sign) {
                    double a = x_from + (x_to - x_from) * (j - 1) / kDenseSamples;
                    double b = x_from + (x_to - x_from) * j / kDenseSamples;
                    auto g = [&](double x) {
                        return w.value(Layout::to_state(x, dense.eval(x)));
                    };
                    double va = g(a), vb = g(b);
                    double xc;
                    if (sign_of(va) == sign_of(vb))
                        xc = b; // grazing touch, land on the sample
                    else
                        xc = solve_bracketed(g, {std::min(a, b), std::max(a, b),
                                                 a <= b ? va : vb, a <= b ? vb : va},
                                             1e-13 * std::max(1.0, std::abs(b)));
                    add_hit(xc, static_cast<int>(wi), 0.0);
                    break;
                }
            }
        }

        // theta crossings of 2*pi*k (wrap bookkeeping).
        double th0 = samples[0].theta, th1 = samples[kDenseSamples].theta;
        double k0 = std::floor(th0 / kTwoPi), k1 = std::floor(th1 / kTwoPi);
        if (k0 != k1) {
            double level = kTwoPi * std::max(k0, k1);
            if (std::abs(th0 - level) > 1e-12) {
                auto g = [&](double x) {
                    return Layout::to_state(x, dense.eval(x)).theta - level;
                };
                double lo = std::min(x_from, x_to), hi = std::max(x_from, x_to);
                double glo = g(lo), ghi = g(hi);
                if (sign_of(glo) != sign_of(ghi)) {
                    double xc = solve_bracketed(g, {lo, hi, glo, ghi},
                                                1e-13 * std::max(1.0, std::abs(hi)));
                    add_hit(xc, -1, level);
                }
            }
        }

        if (hits.empty()) return hits;
        std::sort(hits.begin(), hits.end(),
                  [dir](const Hit& a, const Hit& b) { return dir * a.x < dir * b.x; });
        // Keep the earliest and anything coincident with it.
        double x_first = hits.front().x;
        std::vector<Hit> out;
        for (const Hit& h : hits)
            if (std::abs(h.x - x_first) <= 1e-11 * std::max(1.0, std::abs(x_first)))
                out.push_back(h);
        return out;
    }

    // Record events for the hits at the current (exactly reached) position.
    // Returns true when the driver should stop (first-extremum mode).
    bool handle_hits(const std::vector<Hit>& hits, double dir) {
        bool stop = false;
        for (const Hit& h : hits) {
            if (h.watcher < 0) {
                tr_.events.push_back({tr_.states.size() - 1, EventKind::Wrap});
                continue;
            }
            Watcher& w = watchers_[static_cast<size_t>(h.watcher)];
            switch (w.what) {
                case Watcher::CosSigma: {
                    polish_extremum();
                    EventKind kind = (w.last_sign > 0) == (dir > 0) ? EventKind::TMax
                                                                    : EventKind::TMin;
                    tr_.events.push_back({tr_.states.size() - 1, kind});
                    if (opt_.stop_at_first_extremum) stop = true;
                    break;
                }
                case Watcher::SinSigma:
                    tr_.events.push_back({tr_.states.size() - 1, EventKind::VerticalTangent});
                    break;
                case Watcher::TBreak: {
                    if (w.wrap_t) {
                        tr_.events.push_back({tr_.states.size() - 1, EventKind::Wrap});
                        StateVec<4> y = integ_.y();
                        double& t = (std::is_same_v<Layout, ArcLayout>) ? y[1] : y[0];
                        t += t > 0.0 ? -2.0 * surf_.t0() : 2.0 * surf_.t0();
                        integ_.reset_state(integ_.x(), y);
                        append_state();
                    } else {
                        tr_.events.push_back({tr_.states.size() - 1, EventKind::SegmentJoint});
                    }
                    break;
                }
            }
            w.armed = false;
        }
        return stop;
    }

    // Newton-correct the landed extremum using the exact ODE slope, then
    // overwrite the appended state. Improves the located abscissa beyond the
    // dense-output root when the crossing is shallow.
    void polish_extremum() {
        for (int it = 0; it < 3; ++it) {
            CurveState st = Layout::to_state(integ_.x(), integ_.y());
            double g, gp;
            extremum_residual(st, g, gp);
            if (!std::isfinite(gp) || gp == 0.0) return;
            double delta = -g / gp;
            if (!std::isfinite(delta) || std::abs(delta) > 1e-3) return;
            if (std::abs(delta) < 1e-15 * std::max(1.0, std::abs(integ_.x()))) return;
            integ_.advance_to(integ_.x() + delta);
            tr_.states.back() = Layout::to_state(integ_.x(), integ_.y());
        }
    }

    virtual void extremum_residual(const CurveState& st, double& g, double& gp) const = 0;
    virtual ~CurveDriver() = default;

    const SurfaceProfile& surf_;
    CurveIntegOptions opt_;
    Dopri5<4> integ_;
    Trajectory tr_;
    std::vector<Watcher> watchers_;
};

class ArcDriver final : public CurveDriver<ArcLayout> {
public:
    ArcDriver(const SurfaceProfile& surf, double h, double tol, const CurveIntegOptions& opt)
        : CurveDriver(surf, h, tol, opt, make_rhs(surf, h)), h_(h) {
        add_sigma_watchers(/*vertical_tangents=*/true);
    }

    static Dopri5<4>::Rhs make_rhs(const SurfaceProfile& surf, double h) {
        const SurfaceProfile* sp = &surf;
        double t0 = surf.t0();
        return [sp, h, t0](double, const StateVec<4>& y, StateVec<4>& dy) {
            double t = fold_t(y[1], t0);
            double f = sp->f(t);
            double fp = sp->fp(t);
            double sn = std::sin(y[2]);
            double cs = std::cos(y[2]);
            dy[0] = sn / f;
            dy[1] = cs;
            dy[2] = h - (fp / f) * sn;
            dy[3] = sp->antiderivative(t) * sn / f; // F(t) dtheta/ds
        };
    }

private:
    void extremum_residual(const CurveState& st, double& g, double& gp) const override {
        // g = cos(sigma), g' = -sin(sigma) * dsigma/ds
        double t = fold_t(st.t, surf_.t0());
        double sn = std::sin(st.sigma);
        g = std::cos(st.sigma);
        gp = -sn * (h_ - surf_.fp(t) / surf_.f(t) * sn);
    }

    double h_;
};

class GraphDriver final : public CurveDriver<GraphLayout> {
public:
    GraphDriver(const SurfaceProfile& surf, double h, double tol, const CurveIntegOptions& opt)
        : CurveDriver(surf, h, tol, opt, make_rhs(surf, h)), h_(h) {
        add_sigma_watchers(/*vertical_tangents=*/false);
        // In graph form t-extrema are sigma = pi/2 crossings; reuse the
        // CosSigma watcher, whose value is cos(sigma) = 0 there as well.
    }

    static Dopri5<4>::Rhs make_rhs(const SurfaceProfile& surf, double h) {
        const SurfaceProfile* sp = &surf;
        double t0 = surf.t0();
        return [sp, h, t0](double theta, const StateVec<4>& y, StateVec<4>& dy) {
            double sn = std::sin(y[1]);
            if (sn < kGraphGate) throw GraphFormBreakdown(theta);
            double t = fold_t(y[0], t0);
            double f = sp->f(t);
            double fp = sp->fp(t);
            double ct = std::cos(y[1]) / sn;
            dy[0] = f * ct;
            dy[1] = h * f / sn - fp;
            dy[2] = f / sn;            // ds/dtheta
            dy[3] = sp->antiderivative(t); // F(t)
        };
    }

private:
    void extremum_residual(const CurveState& st, double& g, double& gp) const override {
        // g = cos(sigma), g' = -sin(sigma) * dsigma/dtheta
        double t = fold_t(st.t, surf_.t0());
        double sn = std::sin(st.sigma);
        g = std::cos(st.sigma);
        gp = -sn * (h_ * surf_.f(t) / sn - surf_.fp(t));
    }

    double h_;
};

} // namespace

std::string to_string(CurveClass c) {
    switch (c) {
        case CurveClass::Circle: return "circle";
        case CurveClass::VerticalGeodesic: return "vertical_geodesic";
        case CurveClass::Nodoid: return "nodoid";
        case CurveClass::Unduloid: return "unduloid";
    }
    return "?";
}

std::string to_string(EventKind k) {
    switch (k) {
        case EventKind::TMax: return "t-max";
        case EventKind::TMin: return "t-min";
        case EventKind::VerticalTangent: return "vertical-tangent";
        case EventKind::SegmentJoint: return "segment-joint";
        case EventKind::Wrap: return "wrap";
    }
    return "?";
}

Trajectory integrate_arclength(const SurfaceProfile& surf, const CurveState& init,
                               double h, double s_max, double tol,
                               const CurveIntegOptions& opt) {
    if (!(s_max > init.s))
        throw ConfigError("curve: s_max must exceed the initial arc length");
    ArcDriver driver(surf, h, tol, opt);
    StateVec<4> y0 = {init.theta, fold_t(init.t, surf.t0()), init.sigma, 0.0};
    return driver.run(init.s, y0, s_max, h);
}

Trajectory integrate_graph(const SurfaceProfile& surf, double T, double h,
                           double theta_end, double tol,
                           const CurveIntegOptions& opt) {
    if (theta_end == 0.0) throw ConfigError("curve: theta_end must be nonzero");
    GraphDriver driver(surf, h, tol, opt);
    StateVec<4> y0 = {fold_t(T, surf.t0()), 0.5 * kPi, 0.0, 0.0};
    Trajectory tr = driver.run(0.0, y0, theta_end, h);
    tr.graph_form = true;
    return tr;
}

double first_integral(const SurfaceProfile& surf, const CurveState& st, double h) {
    double t = fold_t(st.t, surf.t0());
    return surf.f(t) * std::sin(st.sigma) - h * surf.antiderivative(t);
}

CurveClass classify_curve(const Trajectory& tr) {
    double t_min = 1e300, t_max = -1e300, th_min = 1e300, th_max = -1e300;
    for (const CurveState& st : tr.states) {
        t_min = std::min(t_min, st.t);
        t_max = std::max(t_max, st.t);
        th_min = std::min(th_min, st.theta);
        th_max = std::max(th_max, st.theta);
    }
    if (t_max - t_min <= 1e-9) return CurveClass::Circle;
    if (th_max - th_min <= 1e-9 && tr.h == 0.0) return CurveClass::VerticalGeodesic;

    // Critical points of t: recorded extrema plus a critical initial state.
    int n_critical = 0;
    bool negative_sin = false;
    const CurveState& first = tr.states.front();
    if (std::abs(std::cos(first.sigma)) <= 1e-9) {
        ++n_critical;
        if (std::sin(first.sigma) < 0.0) negative_sin = true;
    }
    for (const CurveEvent& ev : tr.events) {
        if (ev.kind != EventKind::TMax && ev.kind != EventKind::TMin) continue;
        ++n_critical;
        if (std::sin(tr.states[ev.state_index].sigma) < 0.0) negative_sin = true;
    }
    if (negative_sin) return CurveClass::Nodoid;
    if (n_critical >= 2) return CurveClass::Unduloid;
    throw NumericalError("curve", "insufficient arc to classify (no extremum pair observed)");
}

HalfPeriodResult half_period(const SurfaceProfile& surf, double T, double h,
                             double tol, double theta_budget) {
    CurveIntegOptions opt;
    opt.stop_at_first_extremum = true;
    try {
        Trajectory tr = integrate_graph(surf, T, h, theta_budget, tol, opt);
        for (const CurveEvent& ev : tr.events) {
            if (ev.kind != EventKind::TMax && ev.kind != EventKind::TMin) continue;
            const CurveState& st = tr.states[ev.state_index];
            return {st.theta, CurveClass::Unduloid, st};
        }
        throw NumericalError("curve",
                             "no critical point within the theta budget (circle or budget too small)");
    } catch (const GraphFormBreakdown&) {
        // Nodoid behavior: restart in arc-length form.
        CurveState init{0.0, T, 0.5 * kPi, 0.0};
        double s_budget = theta_budget * surf.f(0.0) + 8.0 * surf.t0();
        Trajectory tr = integrate_arclength(surf, init, h, s_budget, tol, opt);
        for (const CurveEvent& ev : tr.events) {
            if (ev.kind != EventKind::TMax && ev.kind != EventKind::TMin) continue;
            const CurveState& st = tr.states[ev.state_index];
            CurveClass kind = std::sin(st.sigma) < 0.0 ? CurveClass::Nodoid
                                                       : CurveClass::Unduloid;
            return {st.theta, kind, st};
        }
        throw NumericalError("curve", "no critical point within the arc-length budget");
    }
}

} // namespace isotorus
