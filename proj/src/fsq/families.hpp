#pragma once

#include "fsq/domain.hpp"
#include "fsq/field.hpp"
#include "fsq/params.hpp"

namespace fsq {

// Concentration bubble, the extremal family of the whole-space quotient:
//
//   U_lambda(x) = c0 * (lambda / (1 + lambda^2 |x - center|^2))^{(n-2s)/2}
//
// lambda concentrates (profile width ~ 1/lambda), and c0 is the
// lambda-independent normalization that gives unit critical norm.
struct BubbleSpec {
  double lambda = 1.0;
  Point center{0, 0, 0};
  double c0 = 0.0;
};

// Radial cutoff: identically 1 on |x| <= r1, a C2 polynomial ramp on
// [r1, r2], identically 0 outside.  |grad| is bounded by 2/(r2 - r1).
struct CutoffSpec {
  double r1 = 2.0;
  double r2 = 3.0;
};

// Resolved parameters for bubble(); c0 is computed from the unit-norm
// condition once per (n, sigma) and cached.
BubbleSpec bubble_spec(const FracParams& p, double lambda,
                       Point center = {0, 0, 0});

// The bubble as an analytic field.  The support box shrinks like 1/lambda so
// a default sampling grid resolves the core at any concentration; beyond it
// the field carries its exact |x|^{-(n-2s)} power tail.
Field bubble(const FracParams& p, double lambda, Point center = {0, 0, 0});

// eta(|x|) * U_lambda(x): the compactly supported trial function, equal to
// the bubble on B_{r1} and vanishing outside B_{r2}.
Field cutoff_bubble(const FracParams& p, double lambda, CutoffSpec eta = {});

// Inversion image  y -> |y|^{2s-n} f(y / |y|^2).  Requires the support box of
// f to exclude the origin (the image support is unbounded otherwise); the
// returned field throws when evaluated at y = 0.
Field kelvin(const FracParams& p, const Field& f);

// x -> w(x', x_n - c), pushing a compactly supported profile up into the
// half-space.  Throws if the shifted support box would cross x_n = 0 or if w
// declares a far-field tail (it would not translate).
Field translated_bump(const FracParams& p, const Field& w, double c);

// Plateau profile for the boundary-collapse scan on a bounded domain:
// 0 on a collar of width delta/8 along the boundary, 1 at distance >= delta,
// a C1 ramp of the boundary distance in between with |grad| <= 2/delta.
// Requires sigma < 1/2 and 0 < delta < inradius (estimated on a lattice).
Field collapse_profile(const FracParams& p, const Domain& d, double delta);

// Critical rescale  x -> lambda^{(n-2s)/2} theta(lambda x)  with the support
// box contracted by lambda.  Sampled inputs are resampled onto the contracted
// grid (same resolution); analytic inputs stay analytic, and a declared far
// power law is rescaled along.
Field theta_rescale(const FracParams& p, const Field& theta, double lambda);

// Two-sided boundary/decay envelope of half-space minimizers,
//   x_n^{2s-1} (1 + |x|)^{-(n+2s-2)}  on  x_n > 0,
// as an explicit profile (meaningful as an envelope for s > 1/2; evaluable
// for any admissible parameters).  Support box (-20,20)^{n-1} x (0,20).
Field envelope_profile(const FracParams& p);

}  // namespace fsq
