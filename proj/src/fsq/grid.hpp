#pragma once
#include <array>
#include <cstdint>
#include <stdexcept>

#include "fsq/domain.hpp"

namespace fsq {

// Cell-centered uniform tensor grid.  Nodes are cell centers, so every node
// lies strictly inside the support box.  Spacing must be equal on all axes
// (the pair tables assume square cells).
struct Grid {
  int n = 1;
  std::array<double, 3> lo{0, 0, 0}, hi{0, 0, 0};
  std::array<int, 3> res{1, 1, 1};

  Grid() = default;
  Grid(int n_, std::array<double, 3> lo_, std::array<double, 3> hi_, std::array<int, 3> res_)
      : n(n_), lo(lo_), hi(hi_), res(res_) {
    double h0 = (hi[0] - lo[0]) / res[0];
    for (int a = 0; a < n; ++a) {
      if (res[a] < 1) throw std::invalid_argument("grid: resolution must be positive");
      double ha = (hi[a] - lo[a]) / res[a];
      if (ha <= 0 || std::abs(ha - h0) > 1e-12 * h0)
        throw std::invalid_argument("grid: cells must be square");
    }
  }

  static Grid line(double a, double b, int m) { return Grid(1, {a, 0, 0}, {b, 0, 0}, {m, 1, 1}); }
  static Grid plane(double ax, double bx, int mx, double ay, double by, int my) {
    return Grid(2, {ax, ay, 0}, {bx, by, 0}, {mx, my, 1});
  }

  double h() const { return (hi[0] - lo[0]) / res[0]; }
  double cell_volume() const {
    double v = 1;
    for (int a = 0; a < n; ++a) v *= h();
    return v;
  }
  std::int64_t size() const {
    std::int64_t s = 1;
    for (int a = 0; a < n; ++a) s *= res[a];
    return s;
  }
  double coord(int axis, int i) const { return lo[axis] + (i + 0.5) * h(); }
  // flat index is x-major: idx = (i * res[1] + j) * res[2] + k
  Point node(std::int64_t idx) const {
    Point x{0, 0, 0};
    if (n == 1) {
      x[0] = coord(0, static_cast<int>(idx));
    } else if (n == 2) {
      x[0] = coord(0, static_cast<int>(idx / res[1]));
      x[1] = coord(1, static_cast<int>(idx % res[1]));
    } else {
      std::int64_t jk = idx % (static_cast<std::int64_t>(res[1]) * res[2]);
      x[0] = coord(0, static_cast<int>(idx / (static_cast<std::int64_t>(res[1]) * res[2])));
      x[1] = coord(1, static_cast<int>(jk / res[2]));
      x[2] = coord(2, static_cast<int>(jk % res[2]));
    }
    return x;
  }
  Domain box_domain() const { return Domain::box(n, {lo[0], lo[1], lo[2]}, {hi[0], hi[1], hi[2]}); }

  bool same_as(const Grid& g) const {
    if (n != g.n) return false;
    for (int a = 0; a < n; ++a)
      if (lo[a] != g.lo[a] || hi[a] != g.hi[a] || res[a] != g.res[a]) return false;
    return true;
  }
};

}  // namespace fsq
