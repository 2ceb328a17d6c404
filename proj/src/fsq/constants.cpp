#include "fsq/constants.hpp"

#include <cmath>
#include <stdexcept>

#include "fsq/quad.hpp"

namespace fsq {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double unit_sphere_area(int n) {
  switch (n) {
    case 1:
      return 2.0;
    case 2:
      return 2.0 * kPi;
    case 3:
      return 4.0 * kPi;
    default:
      throw std::invalid_argument("unit_sphere_area: n must be 1..3");
  }
}

double a_const(const FracParams& p) {
  double s = p.sigma;
  // |Gamma(-s)| = Gamma(1-s)/s for 0<s<1
  double lg = (2 * s - 1) * std::log(2.0) - 0.5 * p.n * std::log(kPi) +
              std::lgamma(0.5 * (p.n + 2 * s)) - std::lgamma(1 - s) + std::log(s);
  return std::exp(lg);
}

double kappa(const FracParams& p) {
  double s = p.sigma;
  if (p.n == 1) return 1.0 / s;
  // kappa = A/s with A = omega_{n-2} int_0^inf t^{n-2} (1+t^2)^{-(n+2s)/2} dt.
  // Substituting t -> 1/t on [1,inf) folds the range:
  //   A = omega_{n-2} int_0^1 (t^{n-2} + t^{2s}) (1+t^2)^{-(n+2s)/2} dt.
  // The t^{2s} piece has an unbounded derivative at 0, so grade toward 0.
  double ex = -0.5 * (p.n + 2 * s);
  int n = p.n;
  auto smooth = [&](double t) { return std::pow(t, n - 2) * std::pow(1 + t * t, ex); };
  auto kinked = [&](double t) { return std::pow(t, 2 * s) * std::pow(1 + t * t, ex); };
  double A = gl_integrate(64, 0.0, 1.0, smooth) + graded_integrate(24, 0.0, 1.0, 40, kinked);
  return unit_sphere_area(p.n - 1) * A / s;
}

double c0_const(const FracParams& p) {
  // c0^p * omega_{n-1} * int_0^inf r^{n-1}(1+r^2)^{-n} dr = 1, and the radial
  // integral equals twice its [0,1] part by the r -> 1/r symmetry.
  int n = p.n;
  double radial =
      2.0 * gl_integrate(64, 0.0, 1.0,
                         [&](double r) { return std::pow(r, n - 1) * std::pow(1 + r * r, -n); });
  return std::pow(unit_sphere_area(n) * radial, -1.0 / p.p_crit());
}

double reference_quotient(const FracParams& p) {
  double s = p.sigma;
  double n = p.n;
  // sharp spectral constant: 2^{2s} pi^s Gamma((n+2s)/2)/Gamma((n-2s)/2)
  //                          * (Gamma(n/2)/Gamma(n))^{2s/n}
  double lg = 2 * s * std::log(2.0) + s * std::log(kPi) + std::lgamma(0.5 * (n + 2 * s)) -
              std::lgamma(0.5 * (n - 2 * s)) +
              (2 * s / n) * (std::lgamma(0.5 * n) - std::lgamma(n));
  return std::exp(lg) / a_const(p);
}

double plancherel_gaussian_rhs(const FracParams& p) {
  return std::exp(0.5 * p.n * std::log(kPi) + std::lgamma(0.5 * (p.n + 2 * p.sigma)) -
                  std::lgamma(0.5 * p.n));
}

}  // namespace fsq
