// Exercises the quadratic-form layer: grid energies against frozen
// independently-computed values, the FFT pair sum against the direct double
// loop, far-field corrections, norms, potentials, and the structural
// identities (scale covariance, translation covariance, domain monotonicity,
// localization) that the rest of the project leans on.

#include <cmath>
#include <random>

#include "fsq/constants.hpp"
#include "fsq/forms.hpp"
#include "fsq/tables.hpp"
#include "testutil.hpp"

using namespace fsq;

namespace {

Field bubble_1d(double sigma, double lam, double boxr) {
  FracParams p = make_params(1, sigma);
  double e = 1.0 - 2.0 * sigma;
  double c0 = c0_const(p);
  double amp = c0 * std::pow(lam, e / 2.0);
  auto ul = [=](const Point& x) {
    return amp * std::pow(lam * lam + x[0] * x[0], -e / 2.0);
  };
  return Field::analytic(1, ul, {-boxr, 0, 0}, {boxr, 0, 0}, "bubble")
      .with_far_power(FarPower{amp, e});
}

Field bump_1d() {
  auto f = [](const Point& x) {
    double t = 1.0 - x[0] * x[0];
    return t > 0 ? t * t : 0.0;
  };
  return Field::analytic(1, f, {-3, 0, 0}, {3, 0, 0}, "bump");
}

Eigen::ArrayXd random_vector(std::int64_t m, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::ArrayXd u(m);
  for (std::int64_t i = 0; i < m; ++i) u[i] = uni(rng);
  return u;
}

}  // namespace

// The FFT evaluation of the all-pairs sum must agree with the direct
// O(N^2) double loop on non-trivial masks, not just in exact arithmetic.
static void fft_vs_direct() {
  {
    FracParams p = make_params(1, 0.25);
    Grid g = Grid::line(-1.0, 1.0, 200);
    GridEnergy ge(p, g, Domain::ball(1, {0, 0, 0}, 0.8));
    Eigen::ArrayXd u = random_vector(g.size(), 7u);
    Eigen::ArrayXd q = pair_table_1d(p.sigma, 200);
    double direct = detail::far_energy_direct_1d(q, ge.mask(), u);
    CHECK_REL(ge.far_cell_units(u), direct, 1e-12);
  }
  {
    FracParams p = make_params(2, 0.4);
    Grid g = Grid::plane(-1.0, 1.0, 24, -1.0, 1.0, 24);
    GridEnergy ge(p, g, Domain::ball(2, {0, 0, 0}, 0.9));
    Eigen::ArrayXd u = random_vector(g.size(), 11u);
    Eigen::ArrayXXd q = pair_table_2d(p.sigma, 24, 24);
    double direct = detail::far_energy_direct_2d(q, 24, 24, ge.mask(), u);
    CHECK_REL(ge.far_cell_units(u), direct, 1e-12);
  }
}

// Whole-line energies of two compactly supported profiles, frozen from an
// independent high-precision computation (piecewise closed forms for the
// tent, spectral quadrature for the Gaussian).
static void frozen_line_energies() {
  FracParams p = make_params(1, 0.25);
  {
    auto hat = [](const Point& x) {
      double t = 1.0 - std::abs(x[0]);
      return t > 0 ? t : 0.0;
    };
    Field f = sample(Field::analytic(1, hat, {-1, 0, 0}, {1, 0, 0}),
                     Grid::line(-1.0, 1.0, 512));
    CHECK_REL(energy(p, f, Domain::whole_space(1)), 7.06924485719944, 1e-4);
  }
  {
    auto gau = [](const Point& x) { return std::exp(-0.5 * x[0] * x[0]); };
    Field f = sample(Field::analytic(1, gau, {-8, 0, 0}, {8, 0, 0}),
                     Grid::line(-8.0, 8.0, 512));
    double want = plancherel_gaussian_rhs(p) / a_const(p);
    CHECK_REL(energy(p, f, Domain::whole_space(1)), want, 3e-4);
  }
}

static void plancherel() {
  auto [lhs1, rhs1] = plancherel_check(make_params(1, 0.25));
  CHECK_REL(lhs1, rhs1, 3e-4);
  auto [lhs2, rhs2] = plancherel_check(make_params(2, 0.4));
  CHECK_REL(lhs2, rhs2, 5e-3);
  CHECK_THROWS(plancherel_check(make_params(3, 0.6)));
}

// 2-d bump on the whole plane; reference values come from a radial Hankel
// transform of the profile, split the same way the grid scheme splits it
// (pairs inside the sampling box vs pairs straddling its boundary).
static void plane_bump_energy() {
  FracParams p = make_params(2, 0.4);
  auto bump = [](const Point& x) {
    double t = 1.0 - (x[0] * x[0] + x[1] * x[1]);
    return t > 0 ? t * t : 0.0;
  };
  Grid g = Grid::plane(-4.0, 4.0, 128, -4.0, 4.0, 128);
  Field f = sample(Field::analytic(2, bump, {-4, -4, 0}, {4, 4, 0}), g);
  GridEnergy ge(p, g, Domain::whole_space(2));
  const Eigen::ArrayXd& u = f.values();

  double hp = std::pow(g.h(), 2.0 - 2.0 * p.sigma);
  double box_pairs = (ge.far_cell_units(u) + ge.m0_cell_units(u)) * hp;
  double wall = ge.wall_term(u);
  CHECK_REL(box_pairs, 15.11838440, 3e-3);
  CHECK_REL(wall, 3.00574841, 1e-5);
  CHECK_REL(ge.value(u), 18.12413281, 3e-3);
}

static void domain_properties() {
  // a constant is energy-free on any domain strictly inside the sampling box
  {
    FracParams p = make_params(2, 0.4);
    Field one = Field::analytic(2, [](const Point&) { return 1.0; },
                                {-1.25, -1.25, 0}, {1.25, 1.25, 0});
    CHECK(energy(p, one, Domain::ball(2, {0, 0, 0}, 1.0)) == 0.0);
  }
  // growing the domain can only add nonnegative pair contributions
  {
    FracParams p = make_params(1, 0.25);
    Field f = bump_1d();
    double e1 = energy(p, f, Domain::ball(1, {0, 0, 0}, 1.0));
    double e2 = energy(p, f, Domain::ball(1, {0, 0, 0}, 2.0));
    double e3 = energy(p, f, Domain::box(1, {-3, 0, 0}, {3, 0, 0}));
    double e4 = energy(p, f, Domain::whole_space(1));
    CHECK(0.0 < e1);
    CHECK(e1 < e2);
    CHECK(e2 < e3);
    CHECK(e3 < e4);
  }
}

// Dilating the extremal profile together with its sampling box must
// reproduce the same quotient: every term in the scheme scales covariantly.
// On a fixed box the dilation changes the resolved range, so we only ask
// for stability within 1%, and for proximity to the closed-form reference.
static void scale_invariance() {
  FracParams p = make_params(1, 0.25);
  double sref = reference_quotient(p);

  double q0 = 0;
  for (double lam : {1.0, 2.0, 4.0, 16.0}) {
    QuotientReport r = quotient(p, bubble_1d(0.25, lam, 40.0 * lam),
                                Domain::whole_space(1));
    CHECK_ABS(r.lp_norm, 1.0, 1e-6);
    CHECK_REL(r.quotient, sref, 2e-2);
    CHECK(r.energy == r.quotient * (r.lp_norm * r.lp_norm));
    if (lam == 1.0)
      q0 = r.quotient;
    else
      CHECK_REL(r.quotient, q0, 1e-9);
  }

  double qmin = 1e300, qmax = 0;
  for (double lam : {1.0, 2.0, 4.0}) {
    QuotientReport r =
        quotient(p, bubble_1d(0.25, lam, 40.0), Domain::whole_space(1));
    CHECK_REL(r.quotient, sref, 2e-2);
    qmin = std::min(qmin, r.quotient);
    qmax = std::max(qmax, r.quotient);
  }
  CHECK((qmax - qmin) / qmax < 1e-2);
}

static void translation_and_sampling() {
  FracParams p = make_params(1, 0.25);
  Field f0 = bump_1d();
  auto shifted = [](const Point& x) {
    double t = 1.0 - (x[0] - 1.0) * (x[0] - 1.0);
    return t > 0 ? t * t : 0.0;
  };
  Field f1 = Field::analytic(1, shifted, {-2, 0, 0}, {4, 0, 0}, "bump");
  QuotientReport r0 = quotient(p, f0, Domain::whole_space(1));
  QuotientReport r1 = quotient(p, f1, Domain::whole_space(1));
  CHECK_REL(r1.quotient, r0.quotient, 1e-12);

  // sampling an analytic field on its default grid is a no-op energetically
  double ea = energy(p, f0, Domain::whole_space(1));
  double es = energy(p, sample(f0, detail::default_grid(f0)),
                     Domain::whole_space(1));
  CHECK(ea == es);
}

// Removing the lower half-space from the interaction region costs exactly
// the boundary-weight integral; the defect measures how far the grid scheme
// is from that identity.  On the line the two sides are evaluated by the
// same arithmetic, so the defect vanishes identically; on the plane it is
// limited by the angular quadrature of the wall potential and sits orders
// of magnitude below the energies involved, independent of grid refinement.
static void hardy() {
  {
    FracParams p = make_params(1, 0.25);
    auto gau = [](const Point& x) {
      return std::exp(-(x[0] - 3.0) * (x[0] - 3.0));
    };
    Field f = Field::analytic(1, gau, {0.25, 0, 0}, {8.25, 0, 0});
    CHECK_ABS(hardy_defect(p, f), 0.0, 1e-12);
  }
  {
    FracParams p = make_params(2, 0.4);
    auto gau = [](const Point& x) {
      double r2 = x[0] * x[0] + (x[1] - 3.0) * (x[1] - 3.0);
      return std::exp(-2.0 * r2);
    };
    Field f = Field::analytic(2, gau, {-4, 0.25, 0}, {4, 5.75, 0});
    double ew = energy(p, f, Domain::whole_space(2));
    double hd = hardy_defect(p, f);
    CHECK(std::abs(hd) < 1e-4 * ew);
    double hdc = hardy_defect(p, sample(f, Grid::plane(-4, 4, 64, 0.25, 5.75, 44)));
    CHECK(std::abs(hdc) < 1e-4 * ew);
    // support box must stay clear of the hyperplane the weight blows up on
    Field bad = Field::analytic(2, gau, {-4, -0.25, 0}, {4, 5.75, 0});
    CHECK_THROWS(hardy_defect(p, bad));
  }
}

static void localization() {
  FracParams p = make_params(2, 0.4);
  auto bump = [](const Point& x) {
    double t = 1.0 - (x[0] * x[0] + x[1] * x[1]);
    return t > 0 ? t * t : 0.0;
  };
  Field f = Field::analytic(2, bump, {-1.25, -1.25, 0}, {1.25, 1.25, 0});
  Domain ball = Domain::ball(2, {0, 0, 0}, 1.0);

  // trivial partition: the defect cancels exactly, not just approximately
  std::vector<Field> onep{Field::analytic(
      2, [](const Point&) { return 1.0; }, {-1.25, -1.25, 0}, {1.25, 1.25, 0})};
  CHECK(localization_defect(p, f, ball, onep) == 0.0);

  // smooth two-patch square partition subordinate to {r<0.7}, {r>0.3}
  auto psi = [](double r) {
    double t = (r - 0.3) / 0.4;
    t = t < 0 ? 0 : (t > 1 ? 1 : t);
    return t * t * (3 - 2 * t);
  };
  auto chi0 = [=](const Point& x) {
    return std::cos(M_PI_2 * psi(std::hypot(x[0], x[1])));
  };
  auto chi1 = [=](const Point& x) {
    return std::sin(M_PI_2 * psi(std::hypot(x[0], x[1])));
  };
  std::vector<Field> part{
      Field::analytic(2, chi0, {-1.25, -1.25, 0}, {1.25, 1.25, 0}),
      Field::analytic(2, chi1, {-1.25, -1.25, 0}, {1.25, 1.25, 0})};
  double e = energy(p, f, ball);
  double d = localization_defect(p, f, ball, part);
  CHECK(std::abs(d) < 1e-3 * e);

  // partitions whose squares do not sum to one are rejected
  std::vector<Field> bad{
      Field::analytic(2, [&](const Point& x) { return 1.05 * chi0(x); },
                      {-1.25, -1.25, 0}, {1.25, 1.25, 0}),
      Field::analytic(2, chi1, {-1.25, -1.25, 0}, {1.25, 1.25, 0})};
  CHECK_THROWS(localization_defect(p, f, ball, bad));
}

static void potentials() {
  FracParams p = make_params(1, 0.25);
  Domain whole = Domain::whole_space(1);
  Domain b4 = Domain::box(1, {-4, 0, 0}, {4, 0, 0});
  Domain b2 = Domain::box(1, {-2, 0, 0}, {2, 0, 0});

  // closed form at the center of a symmetric box: -2 * 2 * rb^{-2s} / (2s)
  CHECK_ABS(domain_potential(p, {0, 0, 0}, b4, whole), -4.0, 1e-12);
  // the potential vanishes when nothing is removed
  CHECK(domain_potential(p, {0, 0, 0}, b4, b4) == 0.0);
  // removing more of the ambient space pushes the potential down
  CHECK(domain_potential(p, {0, 0, 0}, b2, whole) <
        domain_potential(p, {0, 0, 0}, b4, whole));

  // interval with a hole, against the elementary antiderivative
  Domain ann = Domain::difference(Domain::ball(1, {0, 0, 0}, 3.0),
                                  Domain::ball(1, {0, 0, 0}, 1.0));
  double want = -2.0 * (4.0 + 2.0 / std::sqrt(5.0) - 2.0 / std::sqrt(3.0));
  CHECK_ABS(domain_potential(p, {2, 0, 0}, ann, whole), want, 1e-12);

  CHECK_THROWS(domain_potential(p, {5, 0, 0}, b4, whole));
}

static void lp_norms() {
  FracParams p1 = make_params(1, 0.25);
  // the extremal profile is built to have unit critical norm
  CHECK_ABS(lp_norm(p1, bubble_1d(0.25, 1.0, 40.0), Domain::whole_space(1), 4.0),
            1.0, 1e-6);

  // indicator of the unit disk: sqrt(area)
  FracParams p2 = make_params(2, 0.4);
  Field one = Field::analytic(2, [](const Point&) { return 1.0; },
                              {-1.25, -1.25, 0}, {1.25, 1.25, 0});
  CHECK_REL(lp_norm(p2, one, Domain::ball(2, {0, 0, 0}, 1.0), 2.0),
            std::sqrt(M_PI), 5e-3);

  CHECK_THROWS(lp_norm(p1, bump_1d(), Domain::whole_space(1), 0.5));
  // far tail |x|^{-0.3} is not q-integrable for q = 3
  Field slow = Field::analytic(1, [](const Point& x) {
                 return std::pow(1.0 + x[0] * x[0], -0.15);
               }, {-40, 0, 0}, {40, 0, 0})
                   .with_far_power(FarPower{1.0, 0.3});
  CHECK_THROWS(lp_norm(p1, slow, Domain::whole_space(1), 3.0));
}

// the gradient must be the exact derivative of value(), wall and far-field
// pieces included, since the descent solver trusts it for line searches
static void gradient_vs_differences() {
  auto probe = [](const FracParams& p, const Grid& g, const Domain& d,
                  unsigned seed) {
    GridEnergy ge(p, g, d);
    Eigen::ArrayXd u = random_vector(g.size(), seed);
    Eigen::ArrayXd grad = ge.gradient(u);
    std::mt19937 rng(seed + 1);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(g.size()) - 1);
    for (int t = 0; t < 8; ++t) {
      int k = pick(rng);
      double eps = 1e-5;
      Eigen::ArrayXd up = u, um = u;
      up[k] += eps;
      um[k] -= eps;
      double fd = (ge.value(up) - ge.value(um)) / (2 * eps);
      CHECK_ABS(grad[k], fd, 1e-7 + 1e-6 * std::abs(fd));
    }
  };
  probe(make_params(1, 0.25), Grid::line(-1, 1, 48),
        Domain::ball(1, {0, 0, 0}, 0.8), 3u);
  probe(make_params(2, 0.4), Grid::plane(-1, 1, 12, -1, 1, 12),
        Domain::ball(2, {0, 0, 0}, 0.8), 5u);
}

static void error_paths() {
  FracParams p1 = make_params(1, 0.25);
  // far-field corrections are only defined against the whole space
  Field b = bubble_1d(0.25, 1.0, 40.0);
  CHECK_THROWS(energy(p1, b, Domain::half_space(1)));
  // dimension mismatches
  CHECK_THROWS(energy(make_params(2, 0.4), bump_1d(), Domain::whole_space(2)));
  CHECK_THROWS(energy(p1, bump_1d(), Domain::whole_space(2)));
  // no grid scheme beyond the plane
  Field f3 = Field::analytic(3, [](const Point& x) {
    return std::exp(-x[0] * x[0] - x[1] * x[1] - x[2] * x[2]);
  }, {-4, -4, -4}, {4, 4, 4});
  CHECK_THROWS(energy(make_params(3, 0.6), f3, Domain::whole_space(3)));
}

int main() {
  fft_vs_direct();
  frozen_line_energies();
  plancherel();
  plane_bump_energy();
  domain_properties();
  scale_invariance();
  translation_and_sampling();
  hardy();
  localization();
  potentials();
  lp_norms();
  gradient_vs_differences();
  error_paths();
  return test_summary("forms");
}
