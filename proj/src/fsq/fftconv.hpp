#pragma once
#include <Eigen/Dense>

namespace fsq {

// Circular convolution with a symmetric pair-table kernel, zero-padded so the
// result equals the linear convolution on the grid.  Used for the all-pairs
// far energy: with m the 0/1 mask and ub the masked values,
//   sum_{i != j} Q(i-j) (ub_i - ub_j)^2 = 2 [ sum ub^2 (Ks*m) - sum ub (Ks*ub) ].
class PairKernelFft {
 public:
  PairKernelFft() = default;

  // 1-D kernel from Q(d), d = 0..N-1 (Q[0] ignored, treated as 0)
  static PairKernelFft line(const Eigen::ArrayXd& Q);

  // 2-D kernel from the table Q(dx, dy + Ny - 1); rows = Nx, cols = 2Ny - 1.
  // Offsets are mirrored in dx (the table stores dx >= 0 only).
  static PairKernelFft plane(const Eigen::ArrayXXd& Q);

  // v flattened x-major on the N1 (x N2) grid; returns sum_j Ks(i-j) v_j
  Eigen::ArrayXd apply(const Eigen::ArrayXd& v) const;

  std::int64_t size() const { return std::int64_t(N1_) * N2_; }

 private:
  int n_ = 1;
  int N1_ = 0, N2_ = 1;  // grid extents
  int P1_ = 1, P2_ = 1;  // padded extents (powers of two, >= 2N)
  Eigen::ArrayXcd spec_;  // kernel spectrum, x-major P1 x P2
};

}  // namespace fsq
