#pragma once
#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "fsq/grid.hpp"

namespace fsq {

// Radial far-field power law |f(x)| ~ amp * |x|^{-decay} for |x| beyond the
// support box; lets the energy code bound tail interactions analytically.
struct FarPower {
  double amp = 0.0;
  double decay = 0.0;
};

// A real-valued function on R^n: either an analytic evaluator or grid
// samples.  Analytic fields carry a finite support box (values outside may
// still be nonzero when far_power is set; otherwise they are treated as 0
// beyond the box for quadrature purposes).
class Field {
 public:
  static Field analytic(int n, std::function<double(const Point&)> f,
                        std::array<double, 3> box_lo, std::array<double, 3> box_hi,
                        std::string family = "analytic") {
    Field u;
    u.n_ = n;
    u.eval_ = std::move(f);
    u.box_lo_ = box_lo;
    u.box_hi_ = box_hi;
    u.family_ = std::move(family);
    return u;
  }
  static Field sampled(Grid g, Eigen::ArrayXd values);

  bool is_sampled() const { return sampled_; }
  int dim() const { return n_; }
  const std::string& family() const { return family_; }

  double operator()(const Point& x) const {
    if (!sampled_) return eval_(x);
    // nearest-node lookup keeps the interface total inside the box
    std::int64_t idx = 0;
    for (int a = 0; a < n_; ++a) {
      int i = static_cast<int>(std::floor((x[a] - grid_.lo[a]) / grid_.h()));
      i = std::max(0, std::min(grid_.res[a] - 1, i));
      idx = idx * grid_.res[a] + i;
    }
    return values_[idx];
  }
  double operator()(double x) const { return (*this)(Point{x, 0, 0}); }
  double operator()(double x, double y) const { return (*this)(Point{x, y, 0}); }

  const Grid& grid() const { return grid_; }
  const Eigen::ArrayXd& values() const { return values_; }
  std::array<double, 3> box_lo() const { return box_lo_; }
  std::array<double, 3> box_hi() const { return box_hi_; }

  std::optional<FarPower> far_power() const { return far_; }
  [[nodiscard]] Field with_far_power(FarPower fp) const {
    Field u = *this;
    u.far_ = fp;
    return u;
  }

 private:
  int n_ = 1;
  bool sampled_ = false;
  std::function<double(const Point&)> eval_;
  std::array<double, 3> box_lo_{0, 0, 0}, box_hi_{0, 0, 0};
  Grid grid_;
  Eigen::ArrayXd values_;
  std::string family_ = "analytic";
  std::optional<FarPower> far_;
};

// Node-wise evaluation; idempotent when the field is already sampled on an
// identical grid.  Throws on dimension mismatch or non-finite samples.
Field sample(const Field& f, const Grid& g);

}  // namespace fsq
