#pragma once
#include <stdexcept>

namespace fsq {

// Dimension n and order sigma of the fractional form, with the admissibility
// constraints 0 < sigma < 1 (and sigma < 1/2 when n = 1, where the critical
// exponent would otherwise degenerate).
struct FracParams {
  int n = 1;
  double sigma = 0.25;

  double p_crit() const { return 2.0 * n / (n - 2.0 * sigma); }
  double half_exponent() const { return (n - 2.0 * sigma) / 2.0; }
  double kernel_power() const { return n + 2.0 * sigma; }
};

inline FracParams make_params(int n, double sigma) {
  if (n < 1) throw std::invalid_argument("make_params: dimension must be >= 1");
  if (!(sigma > 0.0 && sigma < 1.0))
    throw std::invalid_argument("make_params: sigma must lie in (0,1)");
  if (n == 1 && sigma >= 0.5)
    throw std::invalid_argument("make_params: n = 1 requires sigma < 1/2");
  return FracParams{n, sigma};
}

}  // namespace fsq
