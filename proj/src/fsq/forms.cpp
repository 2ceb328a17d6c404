#include "fsq/forms.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "fsq/parallel.hpp"
#include "fsq/quad.hpp"
#include "fsq/tables.hpp"

namespace fsq {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t bits(double x) {
  std::uint64_t b;
  std::memcpy(&b, &x, sizeof b);
  return b;
}

// ---- pair-table / moment caches -------------------------------------------
//
// The 2-D table entries depend only on sigma and the offset, not on the grid,
// so one master table per sigma is grown to the largest size requested and
// smaller requests are sliced out of it.

std::mutex g_cache_mu;

std::shared_ptr<const Eigen::ArrayXd> q1_cached(double sigma, int N) {
  static std::map<std::pair<std::uint64_t, int>, std::shared_ptr<const Eigen::ArrayXd>> cache;
  std::lock_guard<std::mutex> lock(g_cache_mu);
  auto key = std::make_pair(bits(sigma), N);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto tab = std::make_shared<Eigen::ArrayXd>(pair_table_1d(sigma, N));
  cache.emplace(key, tab);
  return tab;
}

std::shared_ptr<const Eigen::ArrayXXd> q2_cached(double sigma, int Nx, int Ny) {
  struct Master {
    int Nx = 0, Ny = 0;
    Eigen::ArrayXXd tab;
  };
  static std::map<std::uint64_t, Master> masters;
  std::lock_guard<std::mutex> lock(g_cache_mu);
  Master& m = masters[bits(sigma)];
  if (m.Nx < Nx || m.Ny < Ny) {
    m.Nx = std::max(m.Nx, Nx);
    m.Ny = std::max(m.Ny, Ny);
    m.tab = pair_table_2d(sigma, m.Nx, m.Ny);
  }
  auto out = std::make_shared<Eigen::ArrayXXd>(
      m.tab.block(0, m.Ny - Ny, Nx, 2 * Ny - 1));
  return out;
}

double m0_cached(int n, double sigma) {
  static std::map<std::pair<int, std::uint64_t>, double> cache;
  std::lock_guard<std::mutex> lock(g_cache_mu);
  auto key = std::make_pair(n, bits(sigma));
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  double v = (n == 1) ? grad_moment_1d(sigma) : grad_moment_2d(sigma);
  cache.emplace(key, v);
  return v;
}

// ---- ray geometry ----------------------------------------------------------

double box_exit(const std::array<double, 3>& lo, const std::array<double, 3>& hi, int n,
                const Point& x, const double* dir) {
  double r = kInf;
  for (int a = 0; a < n; ++a) {
    if (dir[a] > 1e-300)
      r = std::min(r, (hi[a] - x[a]) / dir[a]);
    else if (dir[a] < -1e-300)
      r = std::min(r, (lo[a] - x[a]) / dir[a]);
  }
  return r;
}

double ball_exit(const Point& c, double R, int n, const Point& x, const double* dir) {
  double b = 0, rho2 = 0;
  for (int a = 0; a < n; ++a) {
    double d = x[a] - c[a];
    b += d * dir[a];
    rho2 += d * d;
  }
  double disc = b * b + R * R - rho2;
  if (disc < 0) disc = 0;
  return -b + std::sqrt(disc);
}

// int_{domain \ inner} K along rays from x: per direction the set is the
// segment between the inner exit and the domain exit, clamped empty when the
// domain exits first (bounded domains inside the inner set give 0).
template <class InnerExit>
double two_exit_sum(const FracParams& p, const Point& x, InnerExit inner_exit,
                    const Domain& d) {
  const double s2 = 2.0 * p.sigma;
  auto pw = [&](double r) { return std::isfinite(r) ? std::pow(r, -s2) : 0.0; };
  auto ray = [&](const double* dir) {
    double rb = inner_exit(dir);
    double t = pw(rb) - pw(detail::ray_exit(d, x, dir));
    return t > 0 ? t : 0.0;
  };
  if (p.n == 1) {
    const double dp[3] = {1, 0, 0}, dm[3] = {-1, 0, 0};
    return (ray(dp) + ray(dm)) / s2;
  }
  if (p.n == 2) {
    Eigen::ArrayXd th, w;
    gl_map(256, 0.0, 2.0 * M_PI, th, w);
    double acc = 0;
    for (int k = 0; k < th.size(); ++k) {
      double dir[3] = {std::cos(th[k]), std::sin(th[k]), 0};
      acc += w[k] * ray(dir);
    }
    return acc / s2;
  }
  Eigen::ArrayXd ph, wph, mu, wmu;
  gl_map(48, 0.0, 2.0 * M_PI, ph, wph);
  gl_map(24, -1.0, 1.0, mu, wmu);
  double acc = 0;
  for (int i = 0; i < ph.size(); ++i) {
    double cp = std::cos(ph[i]), sp = std::sin(ph[i]);
    for (int j = 0; j < mu.size(); ++j) {
      double st = std::sqrt(std::max(0.0, 1.0 - mu[j] * mu[j]));
      double dir[3] = {st * cp, st * sp, mu[j]};
      acc += wph[i] * wmu[j] * ray(dir);
    }
  }
  return acc / s2;
}

// int_ball K(x - y) dy for x strictly outside the ball
double ball_kernel_integral(const FracParams& p, const Point& x, const Domain& hole) {
  const Point& c = hole.center();
  const double R = hole.radius();
  const double np2s = p.kernel_power();
  double rho2 = 0;
  for (int a = 0; a < p.n; ++a) rho2 += (x[a] - c[a]) * (x[a] - c[a]);
  double rho = std::sqrt(rho2);
  if (rho <= R) throw std::invalid_argument("ball_kernel_integral: point inside the ball");
  if (p.n == 1) {
    double s2 = 2.0 * p.sigma;
    return (std::pow(rho - R, -s2) - std::pow(rho + R, -s2)) / s2;
  }
  Eigen::ArrayXd sr, wsr;
  gl_map(16, 0.0, R, sr, wsr);
  double acc = 0;
  if (p.n == 2) {
    Eigen::ArrayXd al, wal;
    gl_map(32, 0.0, 2.0 * M_PI, al, wal);
    for (int i = 0; i < sr.size(); ++i)
      for (int j = 0; j < al.size(); ++j) {
        double d2 = rho2 + sr[i] * sr[i] - 2.0 * rho * sr[i] * std::cos(al[j]);
        acc += wsr[i] * wal[j] * sr[i] * std::pow(d2, -np2s / 2.0);
      }
    return acc;
  }
  Eigen::ArrayXd mu, wmu;
  gl_map(24, -1.0, 1.0, mu, wmu);
  for (int i = 0; i < sr.size(); ++i)
    for (int j = 0; j < mu.size(); ++j) {
      double d2 = rho2 + sr[i] * sr[i] - 2.0 * rho * sr[i] * mu[j];
      acc += wsr[i] * wmu[j] * sr[i] * sr[i] * 2.0 * M_PI * std::pow(d2, -np2s / 2.0);
    }
  return acc;
}

// hole position relative to the sampling box: the mask absorbs a hole inside
// the box, a disjoint hole becomes a pointwise kernel integral, and a hole
// straddling the box edge is not representable in this scheme.
enum class HolePlacement { Inside, Disjoint };

HolePlacement classify_hole(const Grid& g, const Domain& hole) {
  const Point& c = hole.center();
  const double R = hole.radius();
  bool inside = true;
  double dist2 = 0;
  for (int a = 0; a < g.n; ++a) {
    if (c[a] - R < g.lo[a] || c[a] + R > g.hi[a]) inside = false;
    double d = std::max({0.0, g.lo[a] - c[a], c[a] - g.hi[a]});
    dist2 += d * d;
  }
  if (inside) return HolePlacement::Inside;
  if (std::sqrt(dist2) > R) return HolePlacement::Disjoint;
  throw std::invalid_argument("wall potential: hole straddles the sampling box edge");
}

Eigen::ArrayXd node_mask(const Grid& g, const Domain& d) {
  Eigen::ArrayXd m(g.size());
  for (std::int64_t i = 0; i < g.size(); ++i) m[i] = d.contains(g.node(i)) ? 1.0 : 0.0;
  return m;
}

// ---- exterior corrections (analytic fields with a far-field law) -----------

struct ExteriorOut {
  Eigen::ArrayXd E1, E2;  // per node: int_out f K  and  int_out f^2 K
};

ExteriorOut exterior_node_integrals_1d(const FracParams& p, const Field& f, const Grid& g) {
  const double s = p.sigma;
  const double L = g.hi[0] - g.lo[0];
  Eigen::ArrayXd t, w;
  gl_map(64, 1e-9, 1.0, t, w);
  ExteriorOut out;
  out.E1 = Eigen::ArrayXd::Zero(g.size());
  out.E2 = Eigen::ArrayXd::Zero(g.size());
  gl_rule(64);
  parallel_chunks(g.size(), [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t i = b; i < e; ++i) {
      double x = g.coord(0, static_cast<int>(i));
      double e1 = 0, e2 = 0;
      for (int side = 0; side < 2; ++side) {
        double edge = side == 0 ? g.hi[0] : g.lo[0];
        double sgn = side == 0 ? 1.0 : -1.0;
        for (int k = 0; k < t.size(); ++k) {
          double y, jac;
          if (edge * sgn > 1e-6 * L) {  // edge on the outgoing side of 0
            y = edge / t[k];
            jac = std::abs(edge) / (t[k] * t[k]);
          } else {
            y = edge + sgn * L * (1.0 / t[k] - 1.0);
            jac = L / (t[k] * t[k]);
          }
          double K = std::pow(std::abs(x - y), -1.0 - 2.0 * s);
          double fv = f(y);
          e1 += w[k] * jac * fv * K;
          e2 += w[k] * jac * fv * fv * K;
        }
      }
      out.E1[i] = e1;
      out.E2[i] = e2;
    }
  });
  return out;
}

ExteriorOut exterior_node_integrals_2d(const FracParams& p, const Field& f, const Grid& g) {
  const double np2s = p.kernel_power();
  Eigen::ArrayXd th, wth, t, wt;
  gl_map(96, 0.0, 2.0 * M_PI, th, wth);
  gl_map(32, 1e-6, 1.0, t, wt);
  ExteriorOut out;
  out.E1 = Eigen::ArrayXd::Zero(g.size());
  out.E2 = Eigen::ArrayXd::Zero(g.size());
  parallel_chunks(g.size(), [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t i = b; i < e; ++i) {
      Point x = g.node(i);
      double e1 = 0, e2 = 0;
      for (int a = 0; a < th.size(); ++a) {
        double dir[3] = {std::cos(th[a]), std::sin(th[a]), 0};
        double R = box_exit(g.lo, g.hi, 2, x, dir);
        for (int k = 0; k < t.size(); ++k) {
          double r = R / (t[k] * t[k]);
          double jac = 2.0 * R / (t[k] * t[k] * t[k]);
          double fv = f(x[0] + r * dir[0], x[1] + r * dir[1]);
          double Kr = std::pow(r, 1.0 - np2s);  // r^{-1-2s}: kernel times polar r
          e1 += wth[a] * wt[k] * jac * fv * Kr;
          e2 += wth[a] * wt[k] * jac * fv * fv * Kr;
        }
      }
      out.E1[i] = e1;
      out.E2[i] = e2;
    }
  });
  return out;
}

// Model for the pair energy of both points beyond the box, 1-D: f = A|x|^{-e}
// for |x| > R, reduced to three scale-free double integrals.
double outer_outer_1d(double A, double e, double sigma, double R) {
  const double s2 = 2.0 * sigma;
  Eigen::ArrayXd tw, ww;
  gl_map(64, 1e-12, 1.0, tw, ww);
  auto G = [&](double z) {
    double acc = 0;
    for (int k = 0; k < tw.size(); ++k) {
      double wv = 1.0 / tw[k];
      double d = std::pow(wv, -e) - std::pow(wv + z, -e);
      acc += ww[k] * d * d * wv * wv;
    }
    return acc;
  };
  // z = u^3 concentrates nodes at z -> 0 where G(z) ~ z^2 tames z^{-1-2s}
  double jss = gl_integrate(64, 0.0, 1.0, [&](double u) {
    return 3.0 * std::pow(u, -1.0 - 3.0 * s2) * G(u * u * u);
  });
  for (double a = 1.0; a < 1e6; a *= 2.0)
    jss += gl_integrate(64, a, 2.0 * a,
                        [&](double z) { return std::pow(z, -1.0 - s2) * G(z); });
  jss *= 2.0;
  Eigen::ArrayXd sx, sw;
  gl_map(64, 1e-9, 1.0, sx, sw);
  double jcross = 0;
  for (int i = 0; i < sx.size(); ++i) {
    double x = 1.0 / sx[i], jx = x * x;
    for (int j = 0; j < sx.size(); ++j) {
      double y = 1.0 / sx[j], jy = y * y;
      double d = std::pow(x, -e) - std::pow(y, -e);
      jcross += sw[i] * sw[j] * jx * jy * d * d * std::pow(x + y, -1.0 - s2);
    }
  }
  jcross *= 2.0;
  return A * A * std::pow(R, 1.0 - 2.0 * e - s2) * (2.0 * jss + jcross);
}

// 2-D both-outside term, evaluated numerically from the field itself: outer
// polar integral from the box center, inner polar integral around each outer
// point restricted to the box complement, with an analytic small-radius core.
double outer_outer_2d(const FracParams& p, const Field& f, const Grid& g) {
  const double s2 = 2.0 * p.sigma;
  const Point c{0.5 * (g.lo[0] + g.hi[0]), 0.5 * (g.lo[1] + g.hi[1]), 0};
  Eigen::ArrayXd th, wth, t, wt, ai, wai, ri, wri;
  gl_map(64, 0.0, 2.0 * M_PI, th, wth);
  gl_map(16, 1e-6, 1.0, t, wt);
  gl_map(24, 0.0, 2.0 * M_PI, ai, wai);
  gl_rule(24);
  auto in_box = [&](double px, double py) {
    return px > g.lo[0] && px < g.hi[0] && py > g.lo[1] && py < g.hi[1];
  };
  auto grad_mag = [&](double px, double py) {
    double st = 1e-5 * (1.0 + std::hypot(px, py));
    double fx = (f(px + st, py) - f(px - st, py)) / (2.0 * st);
    double fy = (f(px, py + st) - f(px, py - st)) / (2.0 * st);
    return std::hypot(fx, fy);
  };
  const Eigen::Index nth = th.size(), nt = t.size();
  double total = parallel_sum(nth * nt, [&](std::int64_t idx) {
    const Eigen::Index a = idx / nt, k = idx % nt;
    double dir[3] = {std::cos(th[a]), std::sin(th[a]), 0};
    double R0 = box_exit(g.lo, g.hi, 2, c, dir);
    double r = R0 / (t[k] * t[k]);
    double jac = 2.0 * R0 / (t[k] * t[k] * t[k]);
    double px = c[0] + r * dir[0], py = c[1] + r * dir[1];
    double fx = f(px, py);
    double a0 = 1e-4 * r;
    double inner = M_PI * std::pow(grad_mag(px, py), 2) * std::pow(a0, 2.0 - s2) / (2.0 - s2);
    const double panels[6] = {1e-4 * r, 1e-2 * r, 0.3 * r, 3.0 * r, 30.0 * r, 3000.0 * r};
    for (int pp = 0; pp < 5; ++pp) {
      Eigen::ArrayXd rr, wrr;
      gl_map(24, panels[pp], panels[pp + 1], rr, wrr);
      for (int u = 0; u < rr.size(); ++u) {
        double ring = 0;
        for (int v = 0; v < ai.size(); ++v) {
          double qx = px + rr[u] * std::cos(ai[v]), qy = py + rr[u] * std::sin(ai[v]);
          if (in_box(qx, qy)) continue;
          double d = fx - f(qx, qy);
          ring += wai[v] * d * d;
        }
        inner += wrr[u] * std::pow(rr[u], -1.0 - s2) * ring;
      }
    }
    return wth[a] * wt[k] * jac * r * inner;
  });
  return total;
}

// tail of int |f|^q outside the box for far-power analytic fields
double lp_tail(const FracParams& p, const Field& f, const Grid& g, double q) {
  if (f.far_power()->decay * q <= p.n)
    throw std::invalid_argument("lp_norm: far-field tail of |f|^q is not integrable");
  if (p.n == 1) {
    const double L = g.hi[0] - g.lo[0];
    Eigen::ArrayXd t, w;
    gl_map(64, 1e-9, 1.0, t, w);
    double acc = 0;
    for (int side = 0; side < 2; ++side) {
      double edge = side == 0 ? g.hi[0] : g.lo[0];
      double sgn = side == 0 ? 1.0 : -1.0;
      for (int k = 0; k < t.size(); ++k) {
        double y, jac;
        if (edge * sgn > 1e-6 * L) {
          y = edge / t[k];
          jac = std::abs(edge) / (t[k] * t[k]);
        } else {
          y = edge + sgn * L * (1.0 / t[k] - 1.0);
          jac = L / (t[k] * t[k]);
        }
        acc += w[k] * jac * std::pow(std::abs(f(y)), q);
      }
    }
    return acc;
  }
  const Point c{0.5 * (g.lo[0] + g.hi[0]), 0.5 * (g.lo[1] + g.hi[1]), 0};
  Eigen::ArrayXd th, wth, t, wt;
  gl_map(64, 0.0, 2.0 * M_PI, th, wth);
  gl_map(32, 1e-6, 1.0, t, wt);
  double acc = 0;
  for (int a = 0; a < th.size(); ++a) {
    double dir[3] = {std::cos(th[a]), std::sin(th[a]), 0};
    double R = box_exit(g.lo, g.hi, 2, c, dir);
    for (int k = 0; k < t.size(); ++k) {
      double r = R / (t[k] * t[k]);
      double jac = 2.0 * R / (t[k] * t[k] * t[k]);
      acc += wth[a] * wt[k] * jac * r * std::pow(std::abs(f(c[0] + r * dir[0], c[1] + r * dir[1])), q);
    }
  }
  return acc;
}

struct EnergyBreakdown {
  double grid_far = 0, grid_m0 = 0, wall = 0, ecross = 0, ioo = 0;
  double total = 0, err = 0;
};

EnergyBreakdown energy_breakdown(const FracParams& p, const Field& f, const Domain& d) {
  if (f.dim() != d.dim()) throw std::invalid_argument("energy: field/domain dimension mismatch");
  Grid g = f.is_sampled() ? f.grid() : detail::default_grid(f);
  Field fs = sample(f, g);
  GridEnergy ge(p, g, d);
  const Eigen::ArrayXd& u = fs.values();
  const double hp = std::pow(g.h(), p.n - 2.0 * p.sigma);
  EnergyBreakdown b;
  b.grid_far = ge.far_cell_units(u) * hp;
  b.grid_m0 = ge.m0_cell_units(u) * hp;
  b.wall = ge.wall_term(u);
  if (f.far_power()) {
    if (!f.is_sampled()) {
      if (d.kind() != Domain::Kind::WholeSpace)
        throw std::invalid_argument(
            "energy: far-field corrections are only available on the whole space");
      ExteriorOut eo = p.n == 1 ? exterior_node_integrals_1d(p, f, g)
                                : exterior_node_integrals_2d(p, f, g);
      double hn = g.cell_volume();
      b.ecross = (-4.0 * (u * eo.E1).sum() + 2.0 * eo.E2.sum()) * hn;
      if (p.n == 1) {
        double R = std::max(std::abs(g.lo[0]), std::abs(g.hi[0]));
        b.ioo = outer_outer_1d(f.far_power()->amp, f.far_power()->decay, p.sigma, R);
      } else {
        b.ioo = outer_outer_2d(p, f, g);
      }
    }
    // sampled fields cannot be evaluated beyond their box; they are treated
    // as zero-extended and the declared far law is ignored
  }
  b.total = b.grid_far + b.grid_m0 + b.wall + b.ecross + b.ioo;
  b.err = 0.5 * std::abs(b.grid_m0) + 0.02 * (std::abs(b.ecross) + std::abs(b.ioo));
  return b;
}

}  // namespace

namespace detail {

double ray_exit(const Domain& d, const Point& x, const double dir[3]) {
  switch (d.kind()) {
    case Domain::Kind::WholeSpace:
      return kInf;
    case Domain::Kind::HalfSpace: {
      double dn = dir[d.dim() - 1];
      if (dn >= 0) return kInf;
      return -x[d.dim() - 1] / dn;
    }
    case Domain::Kind::Box:
      return box_exit(d.lo(), d.hi(), d.dim(), x, dir);
    case Domain::Kind::Ball:
      return ball_exit(d.center(), d.radius(), d.dim(), x, dir);
    case Domain::Kind::HalfBall: {
      double rb = ball_exit(Point{0, 0, 0}, d.radius(), d.dim(), x, dir);
      double dn = dir[d.dim() - 1];
      double rh = dn >= 0 ? kInf : -x[d.dim() - 1] / dn;
      return std::min(rb, rh);
    }
    default:
      throw std::invalid_argument("ray_exit: domain kind has no convex ray parametrization");
  }
}

Eigen::ArrayXd wall_potential(const FracParams& p, const Grid& g, const Domain& d) {
  const Domain* base = &d;
  bool subtract_hole = false;
  if (d.kind() == Domain::Kind::Difference) {
    if (d.inner().kind() != Domain::Kind::Ball)
      throw std::invalid_argument("wall potential: only ball-shaped holes are supported");
    base = &d.outer();
    subtract_hole = classify_hole(g, d.inner()) == HolePlacement::Disjoint;
  }
  if (base->kind() == Domain::Kind::GraphEpigraph) {
    // graph domains are truncated at the sampling box: nothing outside
    return Eigen::ArrayXd::Zero(g.size());
  }
  Eigen::ArrayXd W = Eigen::ArrayXd::Zero(g.size());
  gl_rule(256);
  gl_rule(48);
  gl_rule(24);
  parallel_chunks(g.size(), [&](std::int64_t bgn, std::int64_t end) {
    for (std::int64_t i = bgn; i < end; ++i) {
      Point x = g.node(i);
      if (!d.contains(x)) continue;
      double w = two_exit_sum(
          p, x, [&](const double* dir) { return box_exit(g.lo, g.hi, g.n, x, dir); }, *base);
      if (subtract_hole) w -= ball_kernel_integral(p, x, d.inner());
      W[i] = w;
    }
  });
  return W;
}

double far_energy_direct_1d(const Eigen::ArrayXd& Q, const Eigen::ArrayXd& mask,
                            const Eigen::ArrayXd& u) {
  const Eigen::Index N = u.size();
  double acc = parallel_sum(N - 1, [&](std::int64_t t) {
    const Eigen::Index d = t + 1;
    double s = 0;
    for (Eigen::Index i = 0; i + d < N; ++i) {
      double diff = u[i] - u[i + d];
      s += mask[i] * mask[i + d] * diff * diff;
    }
    return Q[d] * s;
  });
  return 2.0 * acc;
}

double far_energy_direct_2d(const Eigen::ArrayXXd& Q, int Nx, int Ny,
                            const Eigen::ArrayXd& mask, const Eigen::ArrayXd& u) {
  // half-space offset order: (0, dy > 0) first, then all dx > 0 rows
  const std::int64_t row = 2 * Ny - 1;
  const std::int64_t count = (Ny - 1) + std::int64_t(Nx - 1) * row;
  double acc = parallel_sum(count, [&](std::int64_t tt) {
    int dx, dy;
    if (tt < Ny - 1) {
      dx = 0;
      dy = static_cast<int>(tt) + 1;
    } else {
      std::int64_t t2 = tt - (Ny - 1);
      dx = static_cast<int>(t2 / row) + 1;
      dy = static_cast<int>(t2 % row) - (Ny - 1);
    }
    double s = 0;
    for (int i = 0; i + dx < Nx; ++i) {
      int jlo = std::max(0, -dy), jhi = std::min(Ny, Ny - dy);
      const std::int64_t base = std::int64_t(i) * Ny, base2 = std::int64_t(i + dx) * Ny + dy;
      for (int j = jlo; j < jhi; ++j) {
        double diff = u[base + j] - u[base2 + j];
        s += mask[base + j] * mask[base2 + j] * diff * diff;
      }
    }
    return Q(dx, dy + Ny - 1) * s;
  });
  return 2.0 * acc;
}

Grid default_grid(const Field& f) {
  auto lo = f.box_lo();
  auto hi = f.box_hi();
  if (f.dim() == 1) return Grid::line(lo[0], hi[0], 4096);
  if (f.dim() != 2)
    throw std::invalid_argument("grid energies support n <= 2");
  double lx = hi[0] - lo[0], ly = hi[1] - lo[1];
  int nx, ny;
  if (lx >= ly) {
    nx = 128;
    double h = lx / nx;
    ny = std::max(1, static_cast<int>(std::lround(ly / h)));
    hi[1] = lo[1] + ny * h;
  } else {
    ny = 128;
    double h = ly / ny;
    nx = std::max(1, static_cast<int>(std::lround(lx / h)));
    hi[0] = lo[0] + nx * h;
  }
  return Grid(2, lo, hi, {nx, ny, 1});
}

}  // namespace detail

// ---- GridEnergy -------------------------------------------------------------

GridEnergy::GridEnergy(const FracParams& p, const Grid& g, const Domain& d)
    : p_(p), grid_(g) {
  if (g.n != p.n) throw std::invalid_argument("grid energy: grid/params dimension mismatch");
  if (d.dim() != p.n) throw std::invalid_argument("grid energy: domain dimension mismatch");
  if (p.n > 2) throw std::invalid_argument("grid energies support n <= 2");
  mask_ = node_mask(g, d);
  W_ = detail::wall_potential(p, g, d) * mask_;
  m0_ = m0_cached(p.n, p.sigma);
  if (p.n == 1) {
    q1_ = q1_cached(p.sigma, g.res[0]);
    kern_ = PairKernelFft::line(*q1_);
  } else {
    q2_ = q2_cached(p.sigma, g.res[0], g.res[1]);
    kern_ = PairKernelFft::plane(*q2_);
  }
  conv_mask_ = kern_.apply(mask_);
}

void GridEnergy::cell_gradients(const Eigen::ArrayXd& u, std::vector<Eigen::ArrayXd>& gs) const {
  gs.assign(p_.n, Eigen::ArrayXd::Zero(u.size()));
  if (p_.n == 1) {
    const Eigen::Index N = u.size();
    for (Eigen::Index i = 0; i < N; ++i) {
      double up = i + 1 < N ? u[i + 1] : 0.0;
      double um = i > 0 ? u[i - 1] : 0.0;
      gs[0][i] = 0.5 * (up - um);
    }
    return;
  }
  const int Nx = grid_.res[0], Ny = grid_.res[1];
  for (int i = 0; i < Nx; ++i)
    for (int j = 0; j < Ny; ++j) {
      const std::int64_t k = std::int64_t(i) * Ny + j;
      double xp = i + 1 < Nx ? u[k + Ny] : 0.0;
      double xm = i > 0 ? u[k - Ny] : 0.0;
      double yp = j + 1 < Ny ? u[k + 1] : 0.0;
      double ym = j > 0 ? u[k - 1] : 0.0;
      gs[0][k] = 0.5 * (xp - xm);
      gs[1][k] = 0.5 * (yp - ym);
    }
}

double GridEnergy::far_cell_units(const Eigen::ArrayXd& u) const {
  Eigen::ArrayXd ub = u * mask_;
  Eigen::ArrayXd cv = kern_.apply(ub);
  return 2.0 * ((ub.square() * conv_mask_).sum() - (ub * cv).sum());
}

double GridEnergy::m0_cell_units(const Eigen::ArrayXd& u) const {
  std::vector<Eigen::ArrayXd> gs;
  cell_gradients(u, gs);
  double s2 = 0;
  for (const auto& ga : gs) s2 += (mask_ * ga.square()).sum();
  return m0_ * s2;
}

double GridEnergy::wall_term(const Eigen::ArrayXd& u) const {
  Eigen::ArrayXd ub = u * mask_;
  return 2.0 * (ub.square() * W_).sum() * grid_.cell_volume();
}

double GridEnergy::value(const Eigen::ArrayXd& u) const {
  if (u.size() != grid_.size())
    throw std::invalid_argument("grid energy: value count does not match grid");
  const double hp = std::pow(grid_.h(), p_.n - 2.0 * p_.sigma);
  return (far_cell_units(u) + m0_cell_units(u)) * hp + wall_term(u);
}

Eigen::ArrayXd GridEnergy::gradient(const Eigen::ArrayXd& u) const {
  if (u.size() != grid_.size())
    throw std::invalid_argument("grid energy: value count does not match grid");
  const double hp = std::pow(grid_.h(), p_.n - 2.0 * p_.sigma);
  Eigen::ArrayXd ub = u * mask_;
  Eigen::ArrayXd cv = kern_.apply(ub);
  Eigen::ArrayXd grad = 4.0 * hp * mask_ * (ub * conv_mask_ - cv);
  std::vector<Eigen::ArrayXd> gs;
  cell_gradients(u, gs);
  const double m0hp = m0_ * hp;
  if (p_.n == 1) {
    const Eigen::Index N = u.size();
    for (Eigen::Index k = 0; k < N; ++k) {
      double acc = 0;
      if (k > 0) acc += gs[0][k - 1] * mask_[k - 1];
      if (k + 1 < N) acc -= gs[0][k + 1] * mask_[k + 1];
      grad[k] += m0hp * acc;
    }
  } else {
    const int Nx = grid_.res[0], Ny = grid_.res[1];
    for (int i = 0; i < Nx; ++i)
      for (int j = 0; j < Ny; ++j) {
        const std::int64_t k = std::int64_t(i) * Ny + j;
        double acc = 0;
        if (i > 0) acc += gs[0][k - Ny] * mask_[k - Ny];
        if (i + 1 < Nx) acc -= gs[0][k + Ny] * mask_[k + Ny];
        if (j > 0) acc += gs[1][k - 1] * mask_[k - 1];
        if (j + 1 < Ny) acc -= gs[1][k + 1] * mask_[k + 1];
        grad[k] += m0hp * acc;
      }
  }
  grad += 4.0 * ub * W_ * grid_.cell_volume();
  return grad;
}

double GridEnergy::lp_power_sum(const Eigen::ArrayXd& u, double q) const {
  return (mask_ * u.abs().pow(q)).sum() * grid_.cell_volume();
}

// ---- public entry points ----------------------------------------------------

double energy(const FracParams& p, const Field& f, const Domain& d) {
  return energy_breakdown(p, f, d).total;
}

double lp_norm(const FracParams& p, const Field& f, const Domain& d, double exponent) {
  if (exponent < 1.0) throw std::invalid_argument("lp_norm: exponent must be >= 1");
  if (f.dim() != d.dim()) throw std::invalid_argument("lp_norm: field/domain dimension mismatch");
  Grid g = f.is_sampled() ? f.grid() : detail::default_grid(f);
  Field fs = sample(f, g);
  Eigen::ArrayXd m = node_mask(g, d);
  double acc = (m * fs.values().abs().pow(exponent)).sum() * g.cell_volume();
  if (!f.is_sampled() && f.far_power() && d.kind() == Domain::Kind::WholeSpace)
    acc += lp_tail(p, f, g, exponent);
  return std::pow(acc, 1.0 / exponent);
}

QuotientReport quotient(const FracParams& p, const Field& f, const Domain& d) {
  EnergyBreakdown b = energy_breakdown(p, f, d);
  QuotientReport r;
  r.lp_norm = lp_norm(p, f, d, p.p_crit());
  r.quad_error_estimate = b.err;
  if (b.total == 0.0 || r.lp_norm == 0.0) {
    r.quotient = 0.0;
    r.energy = 0.0;
    return r;
  }
  double nn = r.lp_norm * r.lp_norm;
  r.quotient = b.total / nn;
  r.energy = r.quotient * nn;  // ties the stored triple together bit-for-bit
  return r;
}

double hardy_defect(const FracParams& p, const Field& f) {
  const int n = f.dim();
  if (n != p.n) throw std::invalid_argument("hardy_defect: field/params dimension mismatch");
  if (f.box_lo()[n - 1] <= 0.0)
    throw std::invalid_argument("hardy_defect: support box touches the half-space boundary");
  Grid g = f.is_sampled() ? f.grid() : detail::default_grid(f);
  Field fs = sample(f, g);
  Eigen::ArrayXd u2 = fs.values().square();
  Eigen::ArrayXd ww = detail::wall_potential(p, g, Domain::whole_space(n));
  Eigen::ArrayXd wh = detail::wall_potential(p, g, Domain::half_space(n));
  Eigen::ArrayXd xn(g.size());
  for (std::int64_t i = 0; i < g.size(); ++i) xn[i] = g.node(i)[n - 1];
  const double hn = g.cell_volume();
  double lhs = 2.0 * (u2 * (ww - wh)).sum() * hn;
  double hardy = kappa(p) * (u2 * xn.pow(-2.0 * p.sigma)).sum() * hn;
  return lhs - hardy;
}

double domain_potential(const FracParams& p, const Point& x, const Domain& d,
                        const Domain& ambient) {
  if (d.dim() != p.n || ambient.dim() != p.n)
    throw std::invalid_argument("domain_potential: dimension mismatch");
  if (!d.contains(x)) throw std::invalid_argument("domain_potential: x outside the domain");
  switch (ambient.kind()) {
    case Domain::Kind::WholeSpace:
    case Domain::Kind::HalfSpace:
    case Domain::Kind::Box:
    case Domain::Kind::Ball:
    case Domain::Kind::HalfBall:
      break;
    default:
      throw std::invalid_argument("domain_potential: unsupported ambient domain kind");
  }
  double w;
  if (d.kind() == Domain::Kind::Difference) {
    const Domain& outer = d.outer();
    const Domain& hole = d.inner();
    if (hole.kind() != Domain::Kind::Ball)
      throw std::invalid_argument("domain_potential: only ball-shaped holes are supported");
    if (ambient.kind() != Domain::Kind::WholeSpace &&
        ambient.boundary_distance(hole.center()) <= hole.radius())
      throw std::invalid_argument("domain_potential: hole must lie inside the ambient domain");
    w = two_exit_sum(p, x, [&](const double* dir) { return detail::ray_exit(outer, x, dir); },
                     ambient);
    w += ball_kernel_integral(p, x, hole);
  } else {
    w = two_exit_sum(p, x, [&](const double* dir) { return detail::ray_exit(d, x, dir); },
                     ambient);
  }
  return -2.0 * w;
}

std::pair<double, double> plancherel_check(const FracParams& p) {
  Grid g = p.n == 1 ? Grid::line(-12.0, 12.0, 1024)
                    : Grid::plane(-12.0, 12.0, 192, -12.0, 12.0, 192);
  Field gau = Field::analytic(
      p.n,
      [](const Point& x) { return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1])); },
      {-12.0, -12.0, 0}, {12.0, 12.0, 0}, "gaussian");
  Field fs = sample(gau, g);
  GridEnergy ge(p, g, Domain::whole_space(p.n));
  double lhs = a_const(p) * ge.value(fs.values());
  return {lhs, plancherel_gaussian_rhs(p)};
}

double localization_defect(const FracParams& p, const Field& f, const Domain& d,
                           const std::vector<Field>& partition) {
  if (partition.empty()) throw std::invalid_argument("localization_defect: empty partition");
  Grid g = f.is_sampled() ? f.grid() : detail::default_grid(f);
  Field fs = sample(f, g);
  GridEnergy ge(p, g, d);
  const Eigen::ArrayXd& u = fs.values();

  std::vector<Eigen::ArrayXd> chi;
  chi.reserve(partition.size());
  for (const Field& c : partition) chi.push_back(sample(c, g).values());
  for (std::int64_t i = 0; i < g.size(); ++i) {
    if (ge.mask()[i] == 0.0) continue;
    double s = 0;
    for (const auto& c : chi) s += c[i] * c[i];
    if (std::abs(s - 1.0) > 1e-12)
      throw std::invalid_argument("localization_defect: partition squares do not sum to 1");
  }

  double whole = ge.value(u);
  double parts = 0;
  for (const auto& c : chi) parts += ge.value(u * c);

  // cross term, assembled directly: far pairs via the kernel convolution and
  // the near-diagonal moment applied to the partition gradients
  Eigen::ArrayXd v = u * ge.mask();
  Eigen::ArrayXd cv = ge.kern_.apply(v);
  double cross_far = 0;
  for (const auto& c : chi) {
    Eigen::ArrayXd vc = v * c;
    cross_far += 2.0 * (((v * c.square()) * cv).sum() - (vc * ge.kern_.apply(vc)).sum());
  }
  double cross_m0 = 0;
  std::vector<Eigen::ArrayXd> gs;
  for (const auto& c : chi) {
    ge.cell_gradients(c, gs);
    double s = 0;
    for (const auto& ga : gs) s += (ge.mask() * u.square() * ga.square()).sum();
    cross_m0 += ge.m0() * s;
  }
  const double hp = std::pow(g.h(), p.n - 2.0 * p.sigma);
  return whole - parts + (cross_far + cross_m0) * hp;
}

}  // namespace fsq
