#pragma once

#include <utility>
#include <vector>

#include "isotorus/closed_curves.hpp"
#include "isotorus/surface.hpp"

namespace isotorus {

// Jacobi potential q(s) = K(t(s)) + h^2 sampled on a uniform arc-length grid
// along a closed curve, starting at a t-maximum. For the curves produced by
// this library q is symmetric about the half length (curves are symmetric
// about their extrema), which is what lets the periodic eigenproblem split
// into Neumann and Dirichlet halves.
struct PotentialProfile {
    std::vector<double> nodes; // s_0 = 0 ... s_n = total_length, uniform
    std::vector<double> q;
    double total_length = 0.0;
    double h = 0.0;

    double value(double s) const; // linear interpolation in s
};

enum class BoundaryCondition { Periodic, Neumann, Dirichlet };

std::string to_string(BoundaryCondition bc);

struct SpectrumResult {
    BoundaryCondition bc = BoundaryCondition::Periodic;
    std::vector<double> eigenvalues; // ascending, lowest n_eigs
    int grid_size = 0;
    bool refined = false;
};

// Resample q along a closed curve (circles and vertical geodesics are
// analytic; trajectories are interpolated shape-preservingly in s).
PotentialProfile potential_along(const SurfaceProfile& surf, const ClosedCurve& c,
                                 int n_nodes = 8192);

// Lowest eigenvalues of J(u) + lambda u = 0, i.e. of -u'' - q u, under the
// given boundary condition. Second-order finite differences (vertex-centered
// Dirichlet, cell-centered Neumann), one Richardson refinement at 2x grid.
// The periodic problem is solved as the union of the Neumann and Dirichlet
// spectra of the half curve.
SpectrumResult spectrum(const PotentialProfile& p, BoundaryCondition bc,
                        int n_eigs, int grid, bool refine = true);

// Neumann and Dirichlet spectra of the fundamental piece (t-max to the next
// t-min, the first half of the sampled potential).
std::pair<SpectrumResult, SpectrumResult>
fundamental_piece_spectra(const PotentialProfile& p, int n_eigs = 6, int grid = 2048);

// Index form I(u) = integral(u'^2 - q u^2) ds on the profile's nodes;
// requires mean(u) = 0 within 1e-8 * ||u||.
double index_form(const PotentialProfile& p, const std::vector<double>& u);
// Same quadratic form without the mean-zero gate (building block for
// multi-component test functions).
double index_form_raw(const PotentialProfile& p, const std::vector<double>& u);

// Lowest eigenvalues of a symmetric tridiagonal matrix by Sturm bisection.
std::vector<double> tridiag_lowest_eigenvalues(const std::vector<double>& diag,
                                               const std::vector<double>& off,
                                               int n_eigs);

} // namespace isotorus
