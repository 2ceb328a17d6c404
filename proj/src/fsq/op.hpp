#pragma once

#include <Eigen/Dense>

#include "fsq/domain.hpp"
#include "fsq/field.hpp"
#include "fsq/params.hpp"

namespace fsq {

// Pointwise principal-value application of the regional operator,
//
//   (A f)(x) = 2 PV int_d (f(x) - f(y)) |x - y|^{-n-2s} dy,
//
// one half of the derivative of the regional form, so that a minimizer with
// unit critical norm satisfies  A u = quotient * |u|^{p-2} u  pointwise.
//
// Analytic fields are integrated by an adaptive radial scheme (Taylor core,
// dyadic panels, closed-form far tail using the field's far-power law when
// present).  Sampled fields fall back to the discrete energy gradient at the
// node nearest to x, which costs a full grid pass.  Supported domains for
// the analytic path: WholeSpace, HalfSpace, Ball, HalfBall, Box, Difference.
double apply_regional(const FracParams& p, const Field& f, const Domain& d,
                      const Point& x);

// The operator at every node of the field's grid (its default grid when
// analytic), computed as energy_gradient / (2 h^n).  This is the discrete
// counterpart of the pointwise definition above and is what the descent
// solver iterates with.
Eigen::ArrayXd apply_regional_grid(const FracParams& p, const Field& f,
                                   const Domain& d);

// Relative L2 residual of the Euler-Lagrange equation
//   A u = multiplier * |u|^{p-2} u,   p = 2n/(n-2s),
// over interior nodes: nodes of the domain at least two cells away from
// every face of the sampling box and from the domain boundary, so that
// truncation and masking artifacts do not pollute the measurement.
//
// Analytic fields are measured with the adaptive pointwise operator on a
// regular subsample of the interior nodes (the full set is quadratically
// expensive and adds nothing).  Sampled fields are measured with the
// discrete gradient on all interior nodes; that is the stationarity notion
// the descent solver actually satisfies, and for fields that extend past
// the grid box it deliberately measures the truncated model, tails cut.
double el_residual(const FracParams& p, const Field& f, const Domain& d,
                   double multiplier);

namespace detail {

// interior-node predicate shared by el_residual and the solver: masked, at
// least two cells from every box face and from the domain boundary
bool interior_node(const Grid& g, const Domain& d, const Point& xi);

// relative L2 residual over interior nodes from precomputed arrays
double el_residual_arrays(const Grid& g, const Domain& d,
                          const Eigen::ArrayXd& mask, const Eigen::ArrayXd& au,
                          const Eigen::ArrayXd& rhs);

}  // namespace detail

}  // namespace fsq
