#pragma once
#include "fsq/params.hpp"

namespace fsq {

// Fourier normalization of the pair kernel: with the unitary transform,
// a * (double-integral energy of u over the whole space) = int |xi|^{2 sigma} |u^(xi)|^2.
// Closed form 2^{2s-1} pi^{-n/2} Gamma((n+2s)/2) / |Gamma(-s)|.
double a_const(const FracParams& p);

// Boundary Hardy constant: kappa = x_n^{2 sigma} * 2 int_{y_n<0} |x-y|^{-n-2s} dy,
// independent of x. Evaluated by reducing to a radial integral in the
// transverse variables (quadrature for n >= 2, closed form 1/sigma for n = 1).
double kappa(const FracParams& p);

// Normalization constant of the standard decaying profile
// c0 (1+|x|^2)^{-(n-2s)/2}, fixed so its critical-norm is 1. Quadrature on a
// folded radial integral (the r -> 1/r symmetry makes the range finite).
double c0_const(const FracParams& p);

// Whole-space sharp quotient for the double-integral energy form
// (spectral sharp constant divided by a_const), via the Gamma closed form.
double reference_quotient(const FracParams& p);

// int |xi|^{2s} e^{-|xi|^2} d xi = pi^{n/2} Gamma((n+2s)/2) / Gamma(n/2):
// the exact right side of the Plancherel identity for the Gaussian e^{-|x|^2/2}.
double plancherel_gaussian_rhs(const FracParams& p);

// surface area of the unit sphere S^{n-1}, n = 1..3
double unit_sphere_area(int n);

}  // namespace fsq
