#include "fsq/fftconv.hpp"

#include <stdexcept>
#include <unsupported/Eigen/FFT>

namespace fsq {

namespace {

int next_pow2(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

using CArr = Eigen::ArrayXcd;

// in-place 2-D complex FFT on an x-major P1 x P2 array via row-column passes
void fft2(CArr& a, int P1, int P2, bool inverse) {
  Eigen::FFT<double> fft;
  Eigen::VectorXcd in(P2), out(P2);
  for (int i = 0; i < P1; ++i) {
    for (int j = 0; j < P2; ++j) in[j] = a[std::int64_t(i) * P2 + j];
    if (inverse)
      fft.inv(out, in);
    else
      fft.fwd(out, in);
    for (int j = 0; j < P2; ++j) a[std::int64_t(i) * P2 + j] = out[j];
  }
  Eigen::VectorXcd ci(P1), co(P1);
  for (int j = 0; j < P2; ++j) {
    for (int i = 0; i < P1; ++i) ci[i] = a[std::int64_t(i) * P2 + j];
    if (inverse)
      fft.inv(co, ci);
    else
      fft.fwd(co, ci);
    for (int i = 0; i < P1; ++i) a[std::int64_t(i) * P2 + j] = co[i];
  }
}

}  // namespace

PairKernelFft PairKernelFft::line(const Eigen::ArrayXd& Q) {
  const int N = static_cast<int>(Q.size());
  if (N < 2) throw std::invalid_argument("PairKernelFft: table too small");
  PairKernelFft k;
  k.n_ = 1;
  k.N1_ = N;
  k.P1_ = next_pow2(2 * N);
  CArr ker = CArr::Zero(k.P1_);
  for (int d = 1; d < N; ++d) {
    ker[d] = Q[d];
    ker[k.P1_ - d] = Q[d];
  }
  Eigen::FFT<double> fft;
  Eigen::VectorXcd in = ker.matrix(), out(k.P1_);
  fft.fwd(out, in);
  k.spec_ = out.array();
  return k;
}

PairKernelFft PairKernelFft::plane(const Eigen::ArrayXXd& Q) {
  const int Nx = static_cast<int>(Q.rows());
  const int Ny = static_cast<int>((Q.cols() + 1) / 2);
  if (Q.cols() != 2 * Ny - 1) throw std::invalid_argument("PairKernelFft: bad table shape");
  PairKernelFft k;
  k.n_ = 2;
  k.N1_ = Nx;
  k.N2_ = Ny;
  k.P1_ = next_pow2(2 * Nx);
  k.P2_ = next_pow2(2 * Ny);
  CArr ker = CArr::Zero(std::int64_t(k.P1_) * k.P2_);
  for (int dx = -(Nx - 1); dx < Nx; ++dx)
    for (int dy = -(Ny - 1); dy < Ny; ++dy) {
      if (dx == 0 && dy == 0) continue;
      // table is computed for dx >= 0; the kernel is even under dx -> -dx
      double q = Q(std::abs(dx), (dx >= 0 ? dy : -dy) + Ny - 1);
      int a = (dx % k.P1_ + k.P1_) % k.P1_;
      int b = (dy % k.P2_ + k.P2_) % k.P2_;
      ker[std::int64_t(a) * k.P2_ + b] = q;
    }
  fft2(ker, k.P1_, k.P2_, false);
  k.spec_ = ker;
  return k;
}

Eigen::ArrayXd PairKernelFft::apply(const Eigen::ArrayXd& v) const {
  if (v.size() != size()) throw std::invalid_argument("PairKernelFft::apply: size mismatch");
  if (n_ == 1) {
    CArr pad = CArr::Zero(P1_);
    for (int i = 0; i < N1_; ++i) pad[i] = v[i];
    Eigen::FFT<double> fft;
    Eigen::VectorXcd f(P1_), g(P1_);
    fft.fwd(f, Eigen::VectorXcd(pad.matrix()));
    CArr prod = f.array() * spec_;
    fft.inv(g, Eigen::VectorXcd(prod.matrix()));
    Eigen::ArrayXd out(N1_);
    for (int i = 0; i < N1_; ++i) out[i] = g[i].real();
    return out;
  }
  CArr pad = CArr::Zero(std::int64_t(P1_) * P2_);
  for (int i = 0; i < N1_; ++i)
    for (int j = 0; j < N2_; ++j) pad[std::int64_t(i) * P2_ + j] = v[std::int64_t(i) * N2_ + j];
  fft2(pad, P1_, P2_, false);
  pad *= spec_;
  fft2(pad, P1_, P2_, true);
  Eigen::ArrayXd out(size());
  for (int i = 0; i < N1_; ++i)
    for (int j = 0; j < N2_; ++j)
      out[std::int64_t(i) * N2_ + j] = pad[std::int64_t(i) * P2_ + j].real();
  return out;
}

}  // namespace fsq
