#include "isotorus/surface.hpp"

#include <algorithm>
#include <cmath>

#include "isotorus/quadrature.hpp"
#include "isotorus/rootfind.hpp"

namespace isotorus {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kValidationTol = 1e-8;
constexpr int kValidationGrid = 4096;
constexpr int kScanSamples = 512;
} // namespace

double Segment::f(double t) const {
    switch (kind) {
        case SegmentKind::Cosine: return p[0] + p[1] * std::cos(p[2] * t + p[3]);
        case SegmentKind::Cosh:   return p[0] * std::cosh(p[1] + p[2] * t);
    }
    return 0.0;
}

double Segment::fp(double t) const {
    switch (kind) {
        case SegmentKind::Cosine: return -p[1] * p[2] * std::sin(p[2] * t + p[3]);
        case SegmentKind::Cosh:   return p[0] * p[2] * std::sinh(p[1] + p[2] * t);
    }
    return 0.0;
}

double Segment::fpp(double t) const {
    switch (kind) {
        case SegmentKind::Cosine: return -p[1] * p[2] * p[2] * std::cos(p[2] * t + p[3]);
        case SegmentKind::Cosh:   return p[0] * p[2] * p[2] * std::cosh(p[1] + p[2] * t);
    }
    return 0.0;
}

double Segment::fppp(double t) const {
    switch (kind) {
        case SegmentKind::Cosine: return p[1] * p[2] * p[2] * p[2] * std::sin(p[2] * t + p[3]);
        case SegmentKind::Cosh:   return p[0] * p[2] * p[2] * p[2] * std::sinh(p[1] + p[2] * t);
    }
    return 0.0;
}

double Segment::fpppp(double t) const {
    switch (kind) {
        case SegmentKind::Cosine:
            return p[1] * p[2] * p[2] * p[2] * p[2] * std::cos(p[2] * t + p[3]);
        case SegmentKind::Cosh:
            return p[0] * p[2] * p[2] * p[2] * p[2] * std::cosh(p[1] + p[2] * t);
    }
    return 0.0;
}

double Segment::antiderivative(double t) const {
    switch (kind) {
        case SegmentKind::Cosine:
            return p[2] != 0.0 ? p[0] * t + p[1] / p[2] * std::sin(p[2] * t + p[3])
                               : (p[0] + p[1] * std::cos(p[3])) * t;
        case SegmentKind::Cosh:
            return p[0] / p[2] * std::sinh(p[1] + p[2] * t);
    }
    return 0.0;
}

SurfaceProfile::SurfaceProfile(std::vector<Segment> segments, std::string name)
    : segments_(std::move(segments)), name_(std::move(name)) {
    if (segments_.empty()) throw ConfigError("surface: empty segment list");
    std::sort(segments_.begin(), segments_.end(),
              [](const Segment& a, const Segment& b) { return a.t_lo < b.t_lo; });
    for (const Segment& s : segments_)
        if (!(s.t_lo < s.t_hi))
            throw ConfigError("surface: segment with t_lo >= t_hi");
    for (size_t i = 1; i < segments_.size(); ++i) {
        if (std::abs(segments_[i].t_lo - segments_[i - 1].t_hi) > 1e-12)
            throw ConfigError("surface: segments do not tile the interval");
        joints_.push_back(segments_[i].t_lo);
    }
    t0_ = segments_.back().t_hi;
    if (std::abs(segments_.front().t_lo + t0_) > 1e-12)
        throw ConfigError("surface: interval must be symmetric, [-t0, t0]");

    // Cumulative constants making antiderivative(t) = integral of f from 0.
    antiderivative_offset_.assign(segments_.size(), 0.0);
    int i0 = -1;
    for (size_t i = 0; i < segments_.size(); ++i)
        if (segments_[i].t_lo <= 0.0 && 0.0 <= segments_[i].t_hi) { i0 = static_cast<int>(i); break; }
    if (i0 < 0) throw ConfigError("surface: no segment contains t = 0");
    antiderivative_offset_[i0] = -segments_[i0].antiderivative(0.0);
    for (int i = i0 + 1; i < static_cast<int>(segments_.size()); ++i) {
        double prev_end = segments_[i - 1].antiderivative(segments_[i - 1].t_hi)
                        + antiderivative_offset_[i - 1];
        antiderivative_offset_[i] = prev_end - segments_[i].antiderivative(segments_[i].t_lo);
    }
    for (int i = i0 - 1; i >= 0; --i) {
        double next_start = segments_[i + 1].antiderivative(segments_[i + 1].t_lo)
                          + antiderivative_offset_[i + 1];
        antiderivative_offset_[i] = next_start - segments_[i].antiderivative(segments_[i].t_hi);
    }

    validate();

    double area = 0.0;
    for (const Segment& s : segments_)
        area += integrate_adaptive([&s](double t) { return s.f(t); }, s.t_lo, s.t_hi,
                                   1e-12, 1e-14);
    total_area_ = 2.0 * kPi * area;

    locate_critical_points();
}

const Segment& SurfaceProfile::segment_toward_zero(double t) const {
    if (t < -t0_ - 1e-12 || t > t0_ + 1e-12)
        throw ConfigError("surface: abscissa outside [-t0, t0]");
    t = std::clamp(t, -t0_, t0_);
    // Pick the segment containing t; exactly at a joint, prefer the side
    // toward t = 0 so K stays consistent with the documented convention.
    for (size_t i = 0; i < segments_.size(); ++i) {
        const Segment& s = segments_[i];
        if (t < s.t_lo || t > s.t_hi) continue;
        if (t == s.t_lo && t > 0.0 && i > 0) return segments_[i - 1];
        if (t == s.t_hi && t < 0.0 && i + 1 < segments_.size()) return segments_[i + 1];
        return s;
    }
    return segments_.back();
}

double SurfaceProfile::f(double t) const { return segment_toward_zero(t).f(t); }
double SurfaceProfile::fp(double t) const { return segment_toward_zero(t).fp(t); }
double SurfaceProfile::fpp(double t) const { return segment_toward_zero(t).fpp(t); }

double SurfaceProfile::Kp(double t) const {
    const Segment& s = segment_toward_zero(t);
    double f = s.f(t), f1 = s.fp(t), f2 = s.fpp(t), f3 = s.fppp(t);
    return (f2 * f1 - f3 * f) / (f * f);
}

double SurfaceProfile::Kpp(double t) const {
    const Segment& s = segment_toward_zero(t);
    double f = s.f(t), f1 = s.fp(t), f2 = s.fpp(t), f3 = s.fppp(t), f4 = s.fpppp(t);
    double g = f2 * f1 - f3 * f;       // f^2 * K'
    double gp = f2 * f2 - f4 * f;      // g' = f''^2 - f'''' f
    return (gp * f - 2.0 * f1 * g) / (f * f * f);
}

double SurfaceProfile::discriminant(double t) const {
    const Segment& s = segment_toward_zero(t);
    double f = s.f(t), f1 = s.fp(t), f2 = s.fpp(t);
    return f1 * f1 - f * f2;
}

double SurfaceProfile::antiderivative(double t) const {
    if (t < -t0_ - 1e-12 || t > t0_ + 1e-12)
        throw ConfigError("surface: abscissa outside [-t0, t0]");
    t = std::clamp(t, -t0_, t0_);
    for (size_t i = 0; i < segments_.size(); ++i)
        if (t <= segments_[i].t_hi || i + 1 == segments_.size())
            return segments_[i].antiderivative(t) + antiderivative_offset_[i];
    return 0.0;
}

MetricSample SurfaceProfile::metric(double t) const {
    const Segment& s = segment_toward_zero(t);
    MetricSample m;
    m.t = t;
    m.f = s.f(t);
    m.fp = s.fp(t);
    m.fpp = s.fpp(t);
    m.K = -m.fpp / m.f;
    m.h = m.fp / m.f;
    m.L = 2.0 * kPi * m.f;
    m.D = m.fp * m.fp - m.f * m.fpp;
    return m;
}

void SurfaceProfile::validate() const {
    // C^1 joins.
    for (double tj : joints_) {
        const Segment* left = nullptr;
        const Segment* right = nullptr;
        for (size_t i = 0; i + 1 < segments_.size(); ++i)
            if (std::abs(segments_[i].t_hi - tj) < 1e-12) {
                left = &segments_[i];
                right = &segments_[i + 1];
            }
        if (!left) continue;
        double scale = std::max(1.0, std::abs(left->f(tj)));
        if (std::abs(left->f(tj) - right->f(tj)) > kValidationTol * scale)
            throw ConfigError("surface: f discontinuous at joint t = " + std::to_string(tj));
        if (std::abs(left->fp(tj) - right->fp(tj)) > kValidationTol * scale)
            throw ConfigError("surface: f' discontinuous at joint t = " + std::to_string(tj));
    }

    double prev_K = 0.0;
    double prev_f = 0.0;
    for (int i = 0; i <= kValidationGrid; ++i) {
        double t = t0_ * static_cast<double>(i) / kValidationGrid;
        double ft = f(t);
        if (!(ft > 0.0))
            throw ConfigError("surface: f must be positive (fails near t = " + std::to_string(t) + ")");
        if (std::abs(ft - f(-t)) > kValidationTol * std::max(1.0, ft))
            throw ConfigError("surface: horizontal symmetry f(t) = f(-t) violated near t = "
                              + std::to_string(t));
        double Kt = K(t);
        if (i > 0) {
            if (Kt > prev_K + kValidationTol)
                throw ConfigError("surface: K must be nonincreasing in |t| (fails near t = "
                                  + std::to_string(t) + ")");
            if (ft > prev_f + kValidationTol)
                throw ConfigError("surface: f must be decreasing on (0, t0) (fails near t = "
                                  + std::to_string(t) + ")");
        }
        prev_K = Kt;
        prev_f = ft;
    }
    if (!(K(0.0) > 0.0)) throw ConfigError("surface: K(0) must be positive");
    if (!(K(t0_) < 0.0)) throw ConfigError("surface: K(t0) must be negative");
    if (std::abs(fp(t0_)) > kValidationTol)
        throw ConfigError("surface: f'(t0) must vanish");
}

void SurfaceProfile::locate_critical_points() {
    critical_.t0 = t0_;
    auto level_cross = [this](double level, bool outermost) -> std::optional<double> {
        std::optional<double> found;
        auto consider = [&](double t) {
            if (!found || (outermost ? t > *found : t < *found)) found = t;
        };
        for (const Segment& s : segments_) {
            double lo = std::max(0.0, s.t_lo);
            if (s.t_hi <= 0.0) continue;
            auto g = [&s, level](double t) {
                return (s.fp(t) * s.fp(t) - s.f(t) * s.fpp(t)) - level;
            };
            for (const Bracket& br : scan_brackets(g, lo, s.t_hi, kScanSamples))
                consider(solve_bracketed(g, br, 1e-13));
        }
        // Jump crossings at interior joints count as roots at the joint.
        for (double tj : joints_) {
            if (tj <= 0.0) continue;
            double lo_side = discriminant(std::nextafter(tj, 0.0));
            double hi_side = discriminant(std::nextafter(tj, t0_));
            if ((lo_side - level) >= -1e-12 && (hi_side - level) < 0.0) consider(tj);
        }
        return found;
    };
    critical_.t_c = level_cross(0.0, /*outermost=*/false);
    critical_.t_tilde = level_cross(1.0, /*outermost=*/true);
}

SphereHyperbolicDerived sphere_hyperbolic_constants(const SphereHyperbolicParams& p) {
    if (p.a <= 0.0 || p.b <= 0.0 || p.t_star <= 0.0)
        throw ConfigError("sphere_hyperbolic: parameters must be positive");
    if (p.t_star >= 0.5 * kPi / p.a)
        throw ConfigError("sphere_hyperbolic: t_star must be below pi/(2a)");
    double cs = std::cos(p.a * p.t_star);
    double sn = std::sin(p.a * p.t_star);
    double c2 = cs * cs / (p.a * p.a) - sn * sn / (p.b * p.b);
    if (!(c2 > 0.0))
        throw ConfigError("sphere_hyperbolic: requires b > a tan(a t_star)");
    SphereHyperbolicDerived out;
    out.c = std::sqrt(c2);
    out.d = p.b * p.t_star + std::acosh(cs / (p.a * out.c));
    out.t0 = out.d / p.b;
    return out;
}

SurfaceProfile build_standard_torus(const StandardTorusParams& p) {
    if (p.a <= 0.0 || p.r <= 0.0)
        throw ConfigError("standard torus: a and r must be positive");
    if (p.a < p.r * (1.0 + 1e-6))
        throw ConfigError("standard torus: requires a > r (embedded torus)");
    Segment s;
    s.t_lo = -kPi * p.r;
    s.t_hi = kPi * p.r;
    s.kind = SegmentKind::Cosine;
    s.p = {p.a, p.r, 1.0 / p.r, 0.0};
    return SurfaceProfile({s}, "standard(a=" + std::to_string(p.a) + ", r=" + std::to_string(p.r) + ")");
}

SurfaceProfile build_sphere_hyperbolic(const SphereHyperbolicParams& p) {
    SphereHyperbolicDerived k = sphere_hyperbolic_constants(p);
    Segment lower_cosh{-k.t0, -p.t_star, SegmentKind::Cosh, {k.c, k.d, p.b, 0.0}};
    Segment lower_cos{-p.t_star, 0.0, SegmentKind::Cosine, {0.0, 1.0 / p.a, p.a, 0.0}};
    Segment upper_cos{0.0, p.t_star, SegmentKind::Cosine, {0.0, 1.0 / p.a, p.a, 0.0}};
    Segment upper_cosh{p.t_star, k.t0, SegmentKind::Cosh, {k.c, k.d, -p.b, 0.0}};
    return SurfaceProfile({lower_cosh, lower_cos, upper_cos, upper_cosh},
                          "sphere_hyperbolic(a=" + std::to_string(p.a)
                              + ", t*=" + std::to_string(p.t_star)
                              + ", b=" + std::to_string(p.b) + ")");
}

SurfaceProfile build_custom(std::vector<Segment> segments, std::string name) {
    return SurfaceProfile(std::move(segments), std::move(name));
}

} // namespace isotorus
