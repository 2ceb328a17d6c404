#pragma once
#include <Eigen/Dense>

namespace fsq {

// Scheme coefficients for the all-pairs cell energy in cell units. For two
// unit cells at integer offset d the exact pair contribution to the energy of
// a locally-linear-in-each-cell field is
//   (u_i - u_j)^2 * Q(d) + (local slope)^2 * (variance moment),
// where Q(d) = int_{[-1,1]^n} prod(1-|z_k|) |d+z|^{-(n+2s)} dz is the
// triangular-overlap-weighted kernel mass between the cells. The variance
// moments plus the same-cell kernel mass sum to a single coefficient m0 that
// multiplies sum_i |grad u|_i^2 (central differences, cell units).

// Q(d) for d = 0..N-1; entry 0 is set to 0 (same cell handled by m0).
// Closed form: integrate w^{-1-2s} and w^{-2s} antiderivatives piecewise.
Eigen::ArrayXd pair_table_1d(double sigma, int N);

// m0 for n = 1: same-cell moment plus the variance series (closed form per
// term, analytic remainder beyond Dmax).
double grad_moment_1d(double sigma);

// Q(dx, dy) stored at (dx, dy + Ny - 1), dx in [0, Nx), dy in [-(Ny-1), Ny).
// Entries with a kernel singularity on the closed pair square (offsets with
// max|d| <= 2 near the diagonal) use graded quadrature with an analytic
// innermost-box term; the rest use a fixed tensor Gauss rule per quadrant.
Eigen::ArrayXXd pair_table_2d(double sigma, int Nx, int Ny);

// m0 for n = 2 (same-cell polar integral + variance lattice series + tail).
double grad_moment_2d(double sigma);

}  // namespace fsq
