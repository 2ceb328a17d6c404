#include "fsq/quad.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace fsq {

namespace {

GlRule make_rule(int m) {
  if (m < 1) throw std::invalid_argument("gl_rule: order must be >= 1");
  GlRule r;
  r.x.resize(m);
  r.w.resize(m);
  // Newton iteration on Legendre polynomials, symmetric pairs
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double t = std::cos(pi * (i + 0.75) / (m + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = t;
      for (int k = 2; k <= m; ++k) {
        double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = m * (t * p1 - p0) / (t * t - 1);
      double dt = p1 / pp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    r.x[i] = -t;
    r.x[m - 1 - i] = t;
    double w = 2.0 / ((1 - t * t) * pp * pp);
    r.w[i] = w;
    r.w[m - 1 - i] = w;
  }
  return r;
}

std::map<int, GlRule> g_cache;
std::mutex g_mx;

}  // namespace

const GlRule& gl_rule(int m) {
  std::lock_guard<std::mutex> lk(g_mx);
  auto it = g_cache.find(m);
  if (it == g_cache.end()) it = g_cache.emplace(m, make_rule(m)).first;
  return it->second;
}

void gl_map(int m, double a, double b, Eigen::ArrayXd& x, Eigen::ArrayXd& w) {
  const GlRule& r = gl_rule(m);
  double c = 0.5 * (a + b), hl = 0.5 * (b - a);
  x = c + hl * r.x;
  w = hl * r.w;
}

double gl_integrate(int m, double a, double b, const std::function<double(double)>& f) {
  Eigen::ArrayXd x, w;
  gl_map(m, a, b, x, w);
  double s = 0;
  for (int i = 0; i < m; ++i) s += w[i] * f(x[i]);
  return s;
}

double graded_integrate(int m, double a, double b, int levels,
                        const std::function<double(double)>& f) {
  // panels [a + L*2^{-k-1}, a + L*2^{-k}], k = 0..levels-1, plus the stub
  // [a, a + L*2^{-levels}] which we also integrate (integrand must be finite
  // there or contribute negligibly through the GL nodes' interior placement)
  double L = b - a;
  double s = 0;
  double hi = b;
  for (int k = 1; k <= levels; ++k) {
    double lo = a + L * std::ldexp(1.0, -k);
    s += gl_integrate(m, lo, hi, f);
    hi = lo;
  }
  s += gl_integrate(m, a, hi, f);
  return s;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need >= 2 matching points");
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  if (sxx <= 0) throw std::invalid_argument("fit_line: degenerate abscissae");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.ss_res = syy - f.slope * sxy;
  if (f.ss_res < 0) f.ss_res = 0;  // rounding guard
  f.r2 = (syy > 0) ? 1.0 - f.ss_res / syy : 1.0;
  return f;
}

}  // namespace fsq
