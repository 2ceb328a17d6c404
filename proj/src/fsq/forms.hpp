#pragma once
#include <Eigen/Dense>
#include <memory>
#include <utility>
#include <vector>

#include "fsq/constants.hpp"
#include "fsq/domain.hpp"
#include "fsq/fftconv.hpp"
#include "fsq/field.hpp"
#include "fsq/params.hpp"

namespace fsq {

// One (field, domain) evaluation of the pair energy and the critical norm.
// The stored values satisfy quotient * lp_norm^2 == energy bit-for-bit (the
// energy member is re-derived from the stored quotient).
struct QuotientReport {
  double energy = 0;
  double lp_norm = 0;
  double quotient = 0;
  // conservative bound combining the same-cell correction magnitude and a
  // fixed fraction of the modelled exterior terms; heuristic, not certified
  double quad_error_estimate = 0;
};

// Double integral of (f(x)-f(y))^2 |x-y|^{-n-2s} over d x d.
//
// Scheme: all-pairs cell sums with triangular-overlap pair weights, a
// same-cell gradient correction (precomputed moment m0), a per-node potential
// for the part of d outside the sampling box, and, for analytic fields with a
// declared far-field power law on WholeSpace, quadrature corrections for the
// exterior interactions.  Sampled fields use their own grid; analytic fields
// are sampled on a default grid over their support box (4096 cells in 1-D,
// longest axis 128 in 2-D).  n <= 2 for grid energies.
double energy(const FracParams& p, const Field& f, const Domain& d);

// (int_d |f|^q)^{1/q}; node sums over d plus an exact tail quadrature for
// analytic fields with far_power on WholeSpace.  exponent >= 1.
double lp_norm(const FracParams& p, const Field& f, const Domain& d, double exponent);

// energy / lp_norm(p_crit)^2 with both ingredients
QuotientReport quotient(const FracParams& p, const Field& f, const Domain& d);

// I_{R^n}[f] - I_{half-space}[f] - kappa * int f^2 x_n^{-2s} for f supported
// strictly inside the half-space.  Zero in exact arithmetic; the two domain
// potentials and kappa are computed by independent quadratures, so the value
// measures real discretization error.  Throws if the support box touches the
// boundary.
double hardy_defect(const FracParams& p, const Field& f);

// -2 int_{ambient \ d} |x-y|^{-n-2s} dy for x in d.  d and ambient must be
// convex (interval/box/ball/half-space/half-ball/whole-space).
double domain_potential(const FracParams& p, const Point& x, const Domain& d,
                        const Domain& ambient);

// lhs = a_const * energy(e^{-|x|^2/2}, WholeSpace) on a fixed default grid,
// rhs = pi^{n/2} Gamma((n+2s)/2) / Gamma(n/2).  n <= 2.
std::pair<double, double> plancherel_check(const FracParams& p);

// Signed defect of the localization identity
//   I_d[f] = sum_j I_d[chi_j f] - sum_pairs f(x) f(y) sum_j (chi_j(x)-chi_j(y))^2 K
// for a partition with sum_j chi_j^2 = 1 on d (validated to 1e-12 at nodes).
// The cross term is discretized independently of the energies.
double localization_defect(const FracParams& p, const Field& f, const Domain& d,
                           const std::vector<Field>& partition);

// Assembled grid scheme for one (params, grid, domain) triple: pair tables,
// kernel FFT, domain mask and wall potential are precomputed so that repeated
// energy/gradient evaluations (the solver inner loop) are cheap.
class GridEnergy {
 public:
  GridEnergy(const FracParams& p, const Grid& g, const Domain& d);

  // far + same-cell + wall terms for node values u (x-major, zero treated
  // outside the domain mask); excludes any analytic exterior corrections
  double value(const Eigen::ArrayXd& u) const;

  // exact derivative of value() with respect to each node value
  Eigen::ArrayXd gradient(const Eigen::ArrayXd& u) const;

  double far_cell_units(const Eigen::ArrayXd& u) const;  // FFT all-pairs sum
  double m0_cell_units(const Eigen::ArrayXd& u) const;   // m0 * sum g^2
  double wall_term(const Eigen::ArrayXd& u) const;       // 2 sum u^2 W h^n

  // masked node quadrature of |u|^q
  double lp_power_sum(const Eigen::ArrayXd& u, double q) const;

  const Eigen::ArrayXd& mask() const { return mask_; }
  const Eigen::ArrayXd& wall() const { return W_; }
  const Grid& grid() const { return grid_; }
  const FracParams& params() const { return p_; }
  double m0() const { return m0_; }

 private:
  FracParams p_;
  Grid grid_;
  Eigen::ArrayXd mask_, W_;
  double m0_ = 0;
  PairKernelFft kern_;
  Eigen::ArrayXd conv_mask_;
  std::shared_ptr<const Eigen::ArrayXd> q1_;
  std::shared_ptr<const Eigen::ArrayXXd> q2_;

  // cell-unit central differences of u restricted to the box (zero outside)
  void cell_gradients(const Eigen::ArrayXd& u, std::vector<Eigen::ArrayXd>& g) const;
  friend double localization_defect(const FracParams&, const Field&, const Domain&,
                                    const std::vector<Field>&);
};

namespace detail {

// O(N^2) reference for the all-pairs far sum, cell units (tests/cross-checks)
double far_energy_direct_1d(const Eigen::ArrayXd& Q, const Eigen::ArrayXd& mask,
                            const Eigen::ArrayXd& u);
double far_energy_direct_2d(const Eigen::ArrayXXd& Q, int Nx, int Ny,
                            const Eigen::ArrayXd& mask, const Eigen::ArrayXd& u);

// smallest r > 0 with x + r dir outside the convex domain (inf if never)
double ray_exit(const Domain& d, const Point& x, const double dir[3]);

// int over (domain \ grid box) of the kernel, per node
Eigen::ArrayXd wall_potential(const FracParams& p, const Grid& g, const Domain& d);

// default sampling grid over the support box of an analytic field
Grid default_grid(const Field& f);

}  // namespace detail

}  // namespace fsq
