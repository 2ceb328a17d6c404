#include "fsq/op.hpp"

#include <cmath>
#include <stdexcept>

#include "fsq/forms.hpp"
#include "fsq/grid.hpp"
#include "fsq/quad.hpp"

namespace fsq {

namespace {

// Field value with the same conventions the energies use: the analytic
// evaluator inside the support box, the far-power law (when present)
// outside it, zero otherwise.
double boxed_value(const Field& f, const Point& y) {
  auto lo = f.box_lo();
  auto hi = f.box_hi();
  bool in = true;
  for (int a = 0; a < f.dim(); ++a) in = in && y[a] >= lo[a] && y[a] <= hi[a];
  if (in) return f(y);
  if (auto fp = f.far_power()) {
    double r2 = 0;
    for (int a = 0; a < f.dim(); ++a) r2 += y[a] * y[a];
    return fp->amp * std::pow(r2, -fp->decay / 2.0);
  }
  return 0.0;
}

// Upper bound for the distance from x to any point of d (infinite for
// unbounded domains); caps the radial quadrature range.
double domain_reach(const Domain& d, const Point& x) {
  auto dist = [&](const Point& c) {
    double r2 = 0;
    for (int a = 0; a < d.dim(); ++a) r2 += (x[a] - c[a]) * (x[a] - c[a]);
    return std::sqrt(r2);
  };
  switch (d.kind()) {
    case Domain::Kind::Ball:
      return dist(d.center()) + d.radius();
    case Domain::Kind::HalfBall:
      return dist(Point{0, 0, 0}) + d.radius();
    case Domain::Kind::Box: {
      double m = 0;
      for (int c = 0; c < (1 << d.dim()); ++c) {
        Point corner = d.lo();
        for (int a = 0; a < d.dim(); ++a)
          if (c & (1 << a)) corner[a] = d.hi()[a];
        m = std::max(m, dist(corner));
      }
      return m;
    }
    case Domain::Kind::Difference:
      return domain_reach(d.outer(), x);
    default:
      return std::numeric_limits<double>::infinity();
  }
}

double apply_point_1d(const FracParams& p, const Field& f, const Domain& d,
                      const Point& x) {
  const double s2 = 2.0 * p.sigma;
  const double fx = f(x);
  const double bd = d.boundary_distance(x);

  double t0 = 1e-3 * (1.0 + std::abs(x[0]));
  if (std::isfinite(bd)) t0 = std::min(t0, 0.45 * bd);

  // Taylor core: both sides are inside d for t < t0
  double fpp = (f(Point{x[0] + t0, 0, 0}) - 2.0 * fx +
                f(Point{x[0] - t0, 0, 0})) / (t0 * t0);
  double inner = -fpp * std::pow(t0, 2.0 - s2) / (2.0 - s2);

  double tmax = 1e5 * (1.0 + std::abs(x[0]));
  double reach = domain_reach(d, x);
  if (std::isfinite(reach)) tmax = std::min(tmax, reach + 1.0);

  Eigen::ArrayXd t, w;
  for (double a = t0; a < tmax; a *= 2) {
    double b = std::min(2.0 * a, tmax);
    gl_map(16, a, b, t, w);
    for (int k = 0; k < t.size(); ++k) {
      double acc = 0;
      Point yp{x[0] + t[k], 0, 0}, ym{x[0] - t[k], 0, 0};
      if (d.contains(yp)) acc += fx - boxed_value(f, yp);
      if (d.contains(ym)) acc += fx - boxed_value(f, ym);
      inner += w[k] * std::pow(t[k], -1.0 - s2) * acc;
    }
  }

  // closed-form tails along rays that never leave d
  const Domain& ray_dom =
      d.kind() == Domain::Kind::Difference ? d.outer() : d;
  for (double s : {1.0, -1.0}) {
    double dir[3] = {s, 0, 0};
    if (std::isfinite(detail::ray_exit(ray_dom, x, dir))) continue;
    inner += fx * std::pow(tmax, -s2) / s2;
    if (auto fp = f.far_power())
      inner -= fp->amp * std::pow(tmax, -(fp->decay + s2)) / (fp->decay + s2);
  }
  return 2.0 * inner;
}

double apply_point_2d(const FracParams& p, const Field& f, const Domain& d,
                      const Point& x) {
  const double s2 = 2.0 * p.sigma;
  const double fx = f(x);
  const double bd = d.boundary_distance(x);
  const double ax = std::hypot(x[0], x[1]);

  double t0 = 1e-3 * (1.0 + ax);
  if (std::isfinite(bd)) t0 = std::min(t0, 0.45 * bd);

  double lap = (f(Point{x[0] + t0, x[1], 0}) + f(Point{x[0] - t0, x[1], 0}) +
                f(Point{x[0], x[1] + t0, 0}) + f(Point{x[0], x[1] - t0, 0}) -
                4.0 * fx) / (t0 * t0);
  double inner = -0.5 * M_PI * lap * std::pow(t0, 2.0 - s2) / (2.0 - s2);

  const int na = 64;
  const double wth = 2.0 * M_PI / na;
  double cth[na], sth[na];
  for (int j = 0; j < na; ++j) {
    cth[j] = std::cos(2.0 * M_PI * j / na);
    sth[j] = std::sin(2.0 * M_PI * j / na);
  }

  double tmax = 1e5 * (1.0 + ax);
  double reach = domain_reach(d, x);
  if (std::isfinite(reach)) tmax = std::min(tmax, reach + 1.0);

  Eigen::ArrayXd t, w;
  for (double a = t0; a < tmax; a *= 2) {
    double b = std::min(2.0 * a, tmax);
    gl_map(16, a, b, t, w);
    for (int k = 0; k < t.size(); ++k) {
      double ang = 0;
      for (int j = 0; j < na; ++j) {
        Point y{x[0] + t[k] * cth[j], x[1] + t[k] * sth[j], 0};
        if (d.contains(y)) ang += fx - boxed_value(f, y);
      }
      inner += w[k] * std::pow(t[k], -1.0 - s2) * wth * ang;
    }
  }

  const Domain& ray_dom =
      d.kind() == Domain::Kind::Difference ? d.outer() : d;
  for (int j = 0; j < na; ++j) {
    double dir[3] = {cth[j], sth[j], 0};
    if (std::isfinite(detail::ray_exit(ray_dom, x, dir))) continue;
    inner += wth * fx * std::pow(tmax, -s2) / s2;
    if (auto fp = f.far_power())
      inner -= wth * fp->amp * std::pow(tmax, -(fp->decay + s2)) /
               (fp->decay + s2);
  }
  return 2.0 * inner;
}

}  // namespace

double apply_regional(const FracParams& p, const Field& f, const Domain& d,
                      const Point& x) {
  if (f.dim() != p.n || d.dim() != p.n)
    throw std::invalid_argument("apply_regional: dimension mismatch");
  if (!d.contains(x))
    throw std::invalid_argument("apply_regional: x outside the domain");

  if (f.is_sampled()) {
    Eigen::ArrayXd a = apply_regional_grid(p, f, d);
    const Grid& g = f.grid();
    std::int64_t idx = 0;
    for (int ax = 0; ax < p.n; ++ax) {
      int i = static_cast<int>(std::floor((x[ax] - g.lo[ax]) / g.h()));
      i = std::max(0, std::min(g.res[ax] - 1, i));
      idx = idx * g.res[ax] + i;
    }
    return a[idx];
  }

  switch (d.kind()) {
    case Domain::Kind::WholeSpace:
    case Domain::Kind::HalfSpace:
    case Domain::Kind::Ball:
    case Domain::Kind::HalfBall:
    case Domain::Kind::Box:
    case Domain::Kind::Difference:
      break;
    default:
      throw std::invalid_argument(
          "apply_regional: unsupported domain kind for the pointwise path");
  }
  if (p.n == 1) return apply_point_1d(p, f, d, x);
  if (p.n == 2) return apply_point_2d(p, f, d, x);
  throw std::invalid_argument("apply_regional: pointwise path supports n <= 2");
}

Eigen::ArrayXd apply_regional_grid(const FracParams& p, const Field& f,
                                   const Domain& d) {
  Grid g = f.is_sampled() ? f.grid() : detail::default_grid(f);
  Field fs = sample(f, g);
  GridEnergy ge(p, g, d);
  return ge.gradient(fs.values()) / (2.0 * g.cell_volume());
}

namespace {

bool pointwise_supported(const FracParams& p, const Domain& d) {
  if (p.n > 2) return false;
  switch (d.kind()) {
    case Domain::Kind::WholeSpace:
    case Domain::Kind::HalfSpace:
    case Domain::Kind::Ball:
    case Domain::Kind::HalfBall:
    case Domain::Kind::Box:
    case Domain::Kind::Difference:
      return true;
    default:
      return false;
  }
}

bool interior_node(const Grid& g, const Domain& d, const Point& xi) {
  const double h = g.h();
  for (int ax = 0; ax < g.n; ++ax)
    if (xi[ax] - g.lo[ax] < 2.0 * h - 1e-12 ||
        g.hi[ax] - xi[ax] < 2.0 * h - 1e-12)
      return false;
  if (!d.contains(xi)) return false;
  double bdist = d.boundary_distance(xi);
  return !(std::isfinite(bdist) && bdist < 2.0 * h);
}

}  // namespace

double el_residual(const FracParams& p, const Field& f, const Domain& d,
                   double multiplier) {
  if (multiplier <= 0)
    throw std::invalid_argument("el_residual: multiplier must be positive");
  const double pc = 2.0 * p.n / (p.n - 2.0 * p.sigma);

  if (!f.is_sampled() && pointwise_supported(p, d)) {
    Grid g = detail::default_grid(f);
    int target = p.n == 1 ? 512 : 40;
    std::array<int, 3> stride{1, 1, 1};
    for (int ax = 0; ax < p.n; ++ax)
      stride[ax] = std::max(1, g.res[ax] / target);
    double num = 0, den = 0;
    for (std::int64_t i = 0; i < g.size(); ++i) {
      std::int64_t rem = i;
      bool on_lattice = true;
      for (int ax = p.n - 1; ax >= 0; --ax) {
        on_lattice = on_lattice && (rem % g.res[ax]) % stride[ax] == 0;
        rem /= g.res[ax];
      }
      if (!on_lattice) continue;
      Point xi = g.node(i);
      if (!interior_node(g, d, xi)) continue;
      double au = apply_regional(p, f, d, xi);
      double ux = f(xi);
      double rhs = multiplier * std::pow(std::abs(ux), pc - 2.0) * ux;
      num += (au - rhs) * (au - rhs);
      den += rhs * rhs;
    }
    if (den == 0)
      throw std::invalid_argument(
          "el_residual: field vanishes on the interior");
    return std::sqrt(num / den);
  }

  Grid g = f.is_sampled() ? f.grid() : detail::default_grid(f);
  Field fs = sample(f, g);
  GridEnergy ge(p, g, d);
  const Eigen::ArrayXd& u = fs.values();
  Eigen::ArrayXd au = ge.gradient(u) / (2.0 * g.cell_volume());
  Eigen::ArrayXd rhs = multiplier * u.abs().pow(pc - 2.0) * u;

  const Eigen::ArrayXd& mask = ge.mask();
  double num = 0, den = 0;
  for (std::int64_t i = 0; i < g.size(); ++i) {
    if (mask[i] == 0.0) continue;
    if (!interior_node(g, d, g.node(i))) continue;
    num += (au[i] - rhs[i]) * (au[i] - rhs[i]);
    den += rhs[i] * rhs[i];
  }
  if (den == 0)
    throw std::invalid_argument("el_residual: field vanishes on the interior");
  return std::sqrt(num / den);
}

}  // namespace fsq
