#pragma once
#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace fsq {

struct GlRule {
  Eigen::ArrayXd x, w;  // nodes and weights on [-1, 1]
};

// Gauss-Legendre rule of order m (cached; thread-safe after first use of a
// given order, callers should warm orders before parallel sections).
const GlRule& gl_rule(int m);

// nodes/weights mapped to [a, b]
void gl_map(int m, double a, double b, Eigen::ArrayXd& x, Eigen::ArrayXd& w);

double gl_integrate(int m, double a, double b, const std::function<double(double)>& f);

// integrate over [a, b] split into geometric (ratio-2) panels refined toward
// `a`, fine end width ~ (b-a)*2^{-levels}; for integrable endpoint
// singularities at a
double graded_integrate(int m, double a, double b, int levels,
                        const std::function<double(double)>& f);

// least-squares line fit of y against x; returns {slope, intercept, r2, ss_res}
struct LineFit {
  double slope = 0, intercept = 0, r2 = 0, ss_res = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fsq
