#include "fsq/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "fsq/constants.hpp"

namespace fsq {

namespace {

double cached_c0(const FracParams& p) {
  static std::mutex mu;
  static std::map<std::pair<int, double>, double> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({p.n, p.sigma});
  if (it != cache.end()) return it->second;
  double v = c0_const(p);
  cache.emplace(std::make_pair(p.n, p.sigma), v);
  return v;
}

// 1 - smoothstep ramp; C2, peak slope 1.875/(r2-r1)
double cutoff_eval(const CutoffSpec& eta, double r) {
  if (r <= eta.r1) return 1.0;
  if (r >= eta.r2) return 0.0;
  double t = (r - eta.r1) / (eta.r2 - eta.r1);
  return 1.0 - t * t * t * (10.0 + t * (6.0 * t - 15.0));
}

}  // namespace

BubbleSpec bubble_spec(const FracParams& p, double lambda, Point center) {
  if (!(lambda > 0))
    throw std::invalid_argument("bubble: lambda must be positive");
  return BubbleSpec{lambda, center, cached_c0(p)};
}

Field bubble(const FracParams& p, double lambda, Point center) {
  BubbleSpec b = bubble_spec(p, lambda, center);
  const int n = p.n;
  const double e = p.n - 2.0 * p.sigma;
  auto fn = [b, n, e](const Point& x) {
    double r2 = 0;
    for (int a = 0; a < n; ++a)
      r2 += (x[a] - b.center[a]) * (x[a] - b.center[a]);
    return b.c0 * std::pow(b.lambda / (1.0 + b.lambda * b.lambda * r2), e / 2.0);
  };
  const double br = 40.0 / lambda;
  Point lo = center, hi = center;
  for (int a = 0; a < n; ++a) {
    lo[a] -= br;
    hi[a] += br;
  }
  Field f = Field::analytic(n, fn, lo, hi, "bubble");
  return f.with_far_power({b.c0 * std::pow(lambda, -e / 2.0), e});
}

Field cutoff_bubble(const FracParams& p, double lambda, CutoffSpec eta) {
  if (!(eta.r1 > 0) || !(eta.r2 > eta.r1))
    throw std::invalid_argument("cutoff_bubble: need 0 < r1 < r2");
  BubbleSpec b = bubble_spec(p, lambda, {0, 0, 0});
  const int n = p.n;
  const double e = p.n - 2.0 * p.sigma;
  auto fn = [b, eta, n, e](const Point& x) {
    double r2 = 0;
    for (int a = 0; a < n; ++a) r2 += x[a] * x[a];
    double u =
        b.c0 * std::pow(b.lambda / (1.0 + b.lambda * b.lambda * r2), e / 2.0);
    return cutoff_eval(eta, std::sqrt(r2)) * u;
  };
  Point lo{0, 0, 0}, hi{0, 0, 0};
  for (int a = 0; a < n; ++a) {
    lo[a] = -eta.r2;
    hi[a] = eta.r2;
  }
  return Field::analytic(n, fn, lo, hi, "cutoff_bubble");
}

Field kelvin(const FracParams& p, const Field& f) {
  const int n = p.n;
  if (f.dim() != n) throw std::invalid_argument("kelvin: dimension mismatch");
  auto lo = f.box_lo();
  auto hi = f.box_hi();
  bool excluded = false;
  for (int a = 0; a < n; ++a) excluded = excluded || lo[a] > 0 || hi[a] < 0;
  if (!excluded)
    throw std::invalid_argument(
        "kelvin: support box of f must exclude the origin");

  const double pw = 2.0 * p.sigma - n;
  Field base = f;
  auto fn = [base, pw, n](const Point& y) {
    double r2 = 0;
    for (int a = 0; a < n; ++a) r2 += y[a] * y[a];
    if (r2 == 0) throw std::domain_error("kelvin: evaluation at the origin");
    Point pre{0, 0, 0};
    for (int a = 0; a < n; ++a) pre[a] = y[a] / r2;
    return std::pow(r2, pw / 2.0) * base(pre);
  };

  // image support: map a dense sample of the support-box boundary (inversion
  // is a homeomorphism away from 0, so the image of the solid box is bounded
  // by the image of its boundary)
  const double huge = std::numeric_limits<double>::infinity();
  Point ilo{huge, huge, huge}, ihi{-huge, -huge, -huge};
  const int m = 33;
  auto consider = [&](const Point& x) {
    double r2 = 0;
    for (int a = 0; a < n; ++a) r2 += x[a] * x[a];
    for (int a = 0; a < n; ++a) {
      double ya = x[a] / r2;
      ilo[a] = std::min(ilo[a], ya);
      ihi[a] = std::max(ihi[a], ya);
    }
  };
  for (int axis = 0; axis < n; ++axis)
    for (int side = 0; side < 2; ++side)
      for (int i = 0; i < (n > 1 ? m : 1); ++i)
        for (int j = 0; j < (n > 2 ? m : 1); ++j) {
          Point x{0, 0, 0};
          x[axis] = side ? hi[axis] : lo[axis];
          int other[2], k = 0;
          for (int a = 0; a < n; ++a)
            if (a != axis) other[k++] = a;
          if (n > 1)
            x[other[0]] = lo[other[0]] +
                          (hi[other[0]] - lo[other[0]]) * i / (m - 1.0);
          if (n > 2)
            x[other[1]] = lo[other[1]] +
                          (hi[other[1]] - lo[other[1]]) * j / (m - 1.0);
          consider(x);
        }
  for (int a = n; a < 3; ++a) {
    ilo[a] = 0;
    ihi[a] = 0;
  }
  // pad 5%, but never across 0 (the image box must keep excluding the origin)
  for (int a = 0; a < n; ++a) {
    double w = ihi[a] - ilo[a];
    double plo = ilo[a] - 0.05 * w, phi = ihi[a] + 0.05 * w;
    if (ilo[a] > 0) plo = std::max(plo, 0.5 * ilo[a]);
    if (ihi[a] < 0) phi = std::min(phi, 0.5 * ihi[a]);
    ilo[a] = plo;
    ihi[a] = phi;
  }
  return Field::analytic(n, fn, ilo, ihi, "kelvin");
}

Field translated_bump(const FracParams& p, const Field& w, double c) {
  const int n = p.n;
  if (w.dim() != n)
    throw std::invalid_argument("translated_bump: dimension mismatch");
  if (w.far_power())
    throw std::invalid_argument(
        "translated_bump: w must be compactly supported (no far tail)");
  if (!(w.box_lo()[n - 1] + c > 0))
    throw std::invalid_argument(
        "translated_bump: shifted support would cross the boundary");
  Field base = w;
  auto fn = [base, c, n](const Point& x) {
    Point y = x;
    y[n - 1] -= c;
    return base(y);
  };
  Point lo = w.box_lo(), hi = w.box_hi();
  lo[n - 1] += c;
  hi[n - 1] += c;
  return Field::analytic(n, fn, lo, hi, "translated_bump");
}

Field collapse_profile(const FracParams& p, const Domain& d, double delta) {
  if (p.sigma >= 0.5)
    throw std::invalid_argument("collapse_profile: requires sigma < 1/2");
  if (d.dim() != p.n)
    throw std::invalid_argument("collapse_profile: dimension mismatch");
  const int n = p.n;

  Point blo{0, 0, 0}, bhi{0, 0, 0};
  const Domain& shape = d.kind() == Domain::Kind::Difference ? d.outer() : d;
  switch (shape.kind()) {
    case Domain::Kind::Ball:
      for (int a = 0; a < n; ++a) {
        blo[a] = shape.center()[a] - shape.radius();
        bhi[a] = shape.center()[a] + shape.radius();
      }
      break;
    case Domain::Kind::HalfBall:
      for (int a = 0; a < n; ++a) {
        blo[a] = -shape.radius();
        bhi[a] = shape.radius();
      }
      blo[n - 1] = 0;
      break;
    case Domain::Kind::Box:
      blo = shape.lo();
      bhi = shape.hi();
      break;
    default:
      throw std::invalid_argument("collapse_profile: domain must be bounded");
  }

  // inradius from a coarse lattice of boundary distances (underestimates, so
  // the admissibility check errs on the strict side)
  double inradius = 0;
  const int m = 33;
  std::int64_t total = 1;
  for (int a = 0; a < n; ++a) total *= m;
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::int64_t rem = idx;
    Point x{0, 0, 0};
    for (int a = 0; a < n; ++a) {
      x[a] = blo[a] + (bhi[a] - blo[a]) * (rem % m) / (m - 1.0);
      rem /= m;
    }
    if (d.contains(x)) inradius = std::max(inradius, d.boundary_distance(x));
  }
  if (!(delta > 0) || delta >= inradius)
    throw std::invalid_argument(
        "collapse_profile: delta must lie in (0, inradius)");

  Domain dd = d;
  auto fn = [dd, delta](const Point& x) {
    if (!dd.contains(x)) return 0.0;
    double t = dd.boundary_distance(x);
    double a = delta / 8.0;
    if (t <= a) return 0.0;
    if (t >= delta) return 1.0;
    double u = (t - a) / (delta - a);
    return u * u * (3.0 - 2.0 * u);
  };
  for (int a = 0; a < n; ++a) {
    double w = bhi[a] - blo[a];
    blo[a] -= 0.05 * w;
    bhi[a] += 0.05 * w;
  }
  return Field::analytic(n, fn, blo, bhi, "collapse_profile");
}

Field theta_rescale(const FracParams& p, const Field& theta, double lambda) {
  if (!(lambda > 0))
    throw std::invalid_argument("theta_rescale: lambda must be positive");
  if (theta.dim() != p.n)
    throw std::invalid_argument("theta_rescale: dimension mismatch");
  const int n = p.n;
  const double amp = std::pow(lambda, 0.5 * (p.n - 2.0 * p.sigma));
  Field base = theta;
  auto fn = [base, lambda, amp, n](const Point& x) {
    Point y{0, 0, 0};
    for (int a = 0; a < n; ++a) y[a] = lambda * x[a];
    return amp * base(y);
  };
  Point lo = theta.box_lo(), hi = theta.box_hi();
  for (int a = 0; a < n; ++a) {
    lo[a] /= lambda;
    hi[a] /= lambda;
  }
  if (theta.is_sampled()) {
    Grid contracted{n, lo, hi, theta.grid().res};
    return sample(Field::analytic(n, fn, lo, hi, "theta_rescale"), contracted);
  }
  Field out = Field::analytic(n, fn, lo, hi, "theta_rescale");
  if (auto fp = theta.far_power())
    out = out.with_far_power(
        {fp->amp * amp * std::pow(lambda, -fp->decay), fp->decay});
  return out;
}

Field envelope_profile(const FracParams& p) {
  const int n = p.n;
  const double bq = 2.0 * p.sigma - 1.0;
  const double fq = p.n + 2.0 * p.sigma - 2.0;
  auto fn = [bq, fq, n](const Point& x) {
    double xn = x[n - 1];
    if (xn <= 0) return 0.0;
    double r2 = 0;
    for (int a = 0; a < n; ++a) r2 += x[a] * x[a];
    return std::pow(xn, bq) * std::pow(1.0 + std::sqrt(r2), -fq);
  };
  Point lo{0, 0, 0}, hi{0, 0, 0};
  for (int a = 0; a < n; ++a) {
    lo[a] = -20.0;
    hi[a] = 20.0;
  }
  lo[n - 1] = 0.0;
  return Field::analytic(n, fn, lo, hi, "envelope");
}

}  // namespace fsq
