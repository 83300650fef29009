#include "isotorus/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "isotorus/interp.hpp"

namespace isotorus {

namespace {

double fold_abs(double t, double t0) {
    double span = 2.0 * t0;
    double u = std::fmod(t + t0, span);
    if (u < 0.0) u += span;
    return u - t0;
}
} // namespace

std::string to_string(BoundaryCondition bc) {
    switch (bc) {
        case BoundaryCondition::Periodic: return "periodic";
        case BoundaryCondition::Neumann: return "neumann";
        case BoundaryCondition::Dirichlet: return "dirichlet";
    }
    return "?";
}

double PotentialProfile::value(double s) const {
    if (nodes.size() < 2) throw NumericalError("spectrum", "potential has no grid");
    if (s <= nodes.front()) return q.front();
    if (s >= nodes.back()) return q.back();
    double step = nodes[1] - nodes[0];
    size_t i = std::min(static_cast<size_t>(s / step), nodes.size() - 2);
    double w = (s - nodes[i]) / step;
    return q[i] * (1.0 - w) + q[i + 1] * w;
}

PotentialProfile potential_along(const SurfaceProfile& surf, const ClosedCurve& c,
                                 int n_nodes) {
    if (n_nodes < 16) throw ConfigError("spectrum: potential grid too coarse");
    PotentialProfile p;
    p.h = c.h;

    auto fill = [&](auto&& t_of_s, double total) {
        p.total_length = total;
        p.nodes.resize(n_nodes + 1);
        p.q.resize(n_nodes + 1);
        for (int i = 0; i <= n_nodes; ++i) {
            double s = total * i / n_nodes;
            double t = fold_abs(t_of_s(s), surf.t0());
            p.nodes[i] = s;
            p.q[i] = surf.K(t) + c.h * c.h;
        }
    };

    switch (c.kind) {
        case CurveClass::Circle: {
            double t = c.t_max;
            fill([t](double) { return t; }, c.length);
            break;
        }
        case CurveClass::VerticalGeodesic: {
            // s = 0 at t = t0 (the "maximum"); t runs down and wraps.
            double t0 = surf.t0();
            fill([t0](double s) { return t0 - s; }, c.length);
            break;
        }
        default: {
            if (c.trajectory.states.empty())
                throw NumericalError("spectrum", "closed curve carries no trajectory");
            std::vector<double> ss, tt;
            ss.reserve(c.trajectory.states.size());
            tt.reserve(c.trajectory.states.size());
            for (const CurveState& st : c.trajectory.states) {
                if (!ss.empty() && st.s <= ss.back()) continue; // wrap duplicates
                ss.push_back(st.s);
                tt.push_back(st.t);
            }
            PchipInterpolant t_of_s(std::move(ss), std::move(tt));
            double half = c.trajectory_is_half ? c.trajectory.states.back().s
                                               : 0.5 * c.length;
            double total = c.trajectory_is_half ? 2.0 * half : c.length;
            fill([&t_of_s, half, total](double s) {
                double sm = s <= half ? s : total - s; // mirror about the half
                return t_of_s(sm);
            }, total);
            break;
        }
    }
    return p;
}

std::vector<double> tridiag_lowest_eigenvalues(const std::vector<double>& diag,
                                               const std::vector<double>& off,
                                               int n_eigs) {
    const int n = static_cast<int>(diag.size());
    if (n == 0 || n_eigs <= 0) return {};
    n_eigs = std::min(n_eigs, n);

    // Sturm count: eigenvalues strictly below x.
    auto count_below = [&](double x) {
        int count = 0;
        double d = diag[0] - x;
        if (d < 0.0) ++count;
        for (int i = 1; i < n; ++i) {
            double e2 = off[i - 1] * off[i - 1];
            if (d == 0.0) d = 1e-300;
            d = diag[i] - x - e2 / d;
            if (d < 0.0) ++count;
        }
        return count;
    };

    double lo = diag[0], hi = diag[0];
    for (int i = 0; i < n; ++i) {
        double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(off[i]) : 0.0);
        lo = std::min(lo, diag[i] - r);
        hi = std::max(hi, diag[i] + r);
    }
    double span = hi - lo;

    std::vector<double> eig(n_eigs);
    for (int k = 0; k < n_eigs; ++k) {
        double a = lo, b = hi;
        for (int it = 0; it < 200 && (b - a) > 1e-14 * std::max(1.0, span); ++it) {
            double mid = 0.5 * (a + b);
            if (count_below(mid) >= k + 1) b = mid;
            else a = mid;
        }
        eig[k] = 0.5 * (a + b);
    }
    return eig;
}

namespace {

// -u'' - q u = lambda u on [0, ell].
std::vector<double> solve_bc(const PotentialProfile& p, double s_offset, double ell,
                             BoundaryCondition bc, int n_eigs, int m) {
    std::vector<double> diag, off;
    const double h = ell / m;
    const double w = 1.0 / (h * h);
    if (bc == BoundaryCondition::Dirichlet) {
        diag.resize(m - 1);
        off.assign(m - 2, -w);
        for (int j = 1; j < m; ++j)
            diag[j - 1] = 2.0 * w - p.value(s_offset + j * h);
    } else { // Neumann, cell-centered
        diag.resize(m);
        off.assign(m - 1, -w);
        for (int j = 0; j < m; ++j) {
            double qc = p.value(s_offset + (j + 0.5) * h);
            diag[j] = (j == 0 || j == m - 1 ? w : 2.0 * w) - qc;
        }
    }
    return tridiag_lowest_eigenvalues(diag, off, n_eigs);
}

std::vector<double> periodic_eigs(const PotentialProfile& p, int n_eigs, int grid) {
    // Union of Neumann and Dirichlet spectra on the half curve (the curves
    // here are symmetric about their extrema, so even/odd reflection about
    // s = 0 decomposes the periodic problem).
    double half = 0.5 * p.total_length;
    int m = std::max(8, grid / 2);
    auto nn = solve_bc(p, 0.0, half, BoundaryCondition::Neumann, n_eigs, m);
    auto dd = solve_bc(p, 0.0, half, BoundaryCondition::Dirichlet, n_eigs, m);
    std::vector<double> merged;
    merged.reserve(nn.size() + dd.size());
    std::merge(nn.begin(), nn.end(), dd.begin(), dd.end(), std::back_inserter(merged));
    merged.resize(std::min<size_t>(merged.size(), n_eigs));
    return merged;
}

std::vector<double> eigs_at_grid(const PotentialProfile& p, BoundaryCondition bc,
                                 int n_eigs, int grid) {
    if (bc == BoundaryCondition::Periodic) return periodic_eigs(p, n_eigs, grid);
    return solve_bc(p, 0.0, p.total_length, bc, n_eigs, grid);
}

} // namespace

SpectrumResult spectrum(const PotentialProfile& p, BoundaryCondition bc,
                        int n_eigs, int grid, bool refine) {
    if (grid < 64) throw ConfigError("spectrum: grid must be >= 64");
    if (n_eigs > grid / 4) throw ConfigError("spectrum: n_eigs must be <= grid/4");
    SpectrumResult out;
    out.bc = bc;
    out.grid_size = grid;
    out.refined = refine;
    std::vector<double> e1 = eigs_at_grid(p, bc, n_eigs, grid);
    if (!refine) {
        out.eigenvalues = std::move(e1);
        return out;
    }
    std::vector<double> e2 = eigs_at_grid(p, bc, n_eigs, 2 * grid);
    out.eigenvalues.resize(e1.size());
    for (size_t i = 0; i < e1.size(); ++i)
        out.eigenvalues[i] = (4.0 * e2[i] - e1[i]) / 3.0;
    // refinement can reorder degenerate pairs by O(h^4)
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
    return out;
}

std::pair<SpectrumResult, SpectrumResult>
fundamental_piece_spectra(const PotentialProfile& p, int n_eigs, int grid) {
    double half = 0.5 * p.total_length;
    auto run = [&](BoundaryCondition bc) {
        SpectrumResult r;
        r.bc = bc;
        r.grid_size = grid;
        r.refined = true;
        auto e1 = solve_bc(p, 0.0, half, bc, n_eigs, grid);
        auto e2 = solve_bc(p, 0.0, half, bc, n_eigs, 2 * grid);
        r.eigenvalues.resize(e1.size());
        for (size_t i = 0; i < e1.size(); ++i)
            r.eigenvalues[i] = (4.0 * e2[i] - e1[i]) / 3.0;
        return r;
    };
    return {run(BoundaryCondition::Neumann), run(BoundaryCondition::Dirichlet)};
}

double index_form_raw(const PotentialProfile& p, const std::vector<double>& u) {
    if (u.size() != p.nodes.size())
        throw ConfigError("index_form: u must be sampled on the potential grid");
    double step = p.nodes[1] - p.nodes[0];
    double acc = 0.0;
    for (size_t i = 0; i + 1 < u.size(); ++i) {
        double du = (u[i + 1] - u[i]) / step;
        double quad = 0.5 * (p.q[i] * u[i] * u[i] + p.q[i + 1] * u[i + 1] * u[i + 1]);
        acc += step * (du * du - quad);
    }
    return acc;
}

double index_form(const PotentialProfile& p, const std::vector<double>& u) {
    double step = p.nodes[1] - p.nodes[0];
    double mean = 0.0, norm2 = 0.0;
    for (size_t i = 0; i + 1 < u.size(); ++i) {
        mean += 0.5 * step * (u[i] + u[i + 1]);
        norm2 += 0.5 * step * (u[i] * u[i] + u[i + 1] * u[i + 1]);
    }
    double norm = std::sqrt(std::max(norm2, 0.0));
    if (std::abs(mean) > 1e-8 * std::max(norm, 1e-300) * std::sqrt(p.total_length))
        throw ConfigError("index_form: test function must have zero mean");
    return index_form_raw(p, u);
}

} // namespace isotorus
