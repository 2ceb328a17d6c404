// Parameter validation, domain geometry, grid indexing, field sampling, and
// the small quadrature / parallel utilities everything else builds on.

#include <cstdlib>
#include <random>

#include "fsq/domain.hpp"
#include "fsq/field.hpp"
#include "fsq/grid.hpp"
#include "fsq/parallel.hpp"
#include "fsq/params.hpp"
#include "fsq/quad.hpp"
#include "testutil.hpp"

using namespace fsq;

static void params_cases() {
  FracParams p = make_params(1, 0.25);
  CHECK_ABS(p.p_crit(), 4.0, 1e-15);
  CHECK_ABS(p.kernel_power(), 1.5, 1e-15);
  CHECK_ABS(p.half_exponent(), 0.25, 1e-15);
  CHECK_REL(make_params(2, 0.45).p_crit(), 40.0 / 11.0, 1e-15);
  CHECK_ABS(make_params(3, 0.6).half_exponent(), 0.9, 1e-15);
  CHECK(make_params(2, 0.5).sigma == 0.5);  // only n = 1 excludes 1/2
  CHECK(make_params(2, 0.99).n == 2);
  CHECK_THROWS(make_params(0, 0.25));
  CHECK_THROWS(make_params(-2, 0.25));
  CHECK_THROWS(make_params(1, 0.0));
  CHECK_THROWS(make_params(1, 1.0));
  CHECK_THROWS(make_params(1, -0.1));
  CHECK_THROWS(make_params(1, 0.5));
  CHECK_THROWS(make_params(1, 0.7));
}

static void domain_cases() {
  Domain ws = Domain::whole_space(2);
  CHECK(ws.contains({1e9, -1e9, 0}));
  CHECK(std::isinf(ws.boundary_distance({0, 0, 0})));

  Domain hs = Domain::half_space(2);
  CHECK(hs.contains({0, 1, 0}));
  CHECK(!hs.contains({0, 0, 0}));  // open set: boundary excluded
  CHECK(!hs.contains({0, -1, 0}));
  CHECK_ABS(hs.boundary_distance({3, 0.7, 0}), 0.7, 1e-15);
  CHECK_THROWS(hs.boundary_distance({0, -1, 0}));

  Domain ball = Domain::ball(2, {1, 2, 0}, 3);
  CHECK(ball.contains({1, 2, 0}));
  CHECK(ball.contains({1, 4.9, 0}));
  CHECK(!ball.contains({1, 5, 0}));
  CHECK_ABS(ball.boundary_distance({1, 2, 0}), 3.0, 1e-15);
  CHECK_ABS(ball.boundary_distance({1, 4, 0}), 1.0, 1e-15);
  CHECK_THROWS(Domain::ball(2, {0, 0, 0}, 0.0));

  Domain box = Domain::box(1, {-4, 0, 0}, {4, 0, 0});
  CHECK(box.contains({0, 0, 0}));
  CHECK(!box.contains({4, 0, 0}));
  CHECK(!box.contains({-4.0001, 0, 0}));
  CHECK_ABS(box.boundary_distance({3.5, 0, 0}), 0.5, 1e-15);
  CHECK_THROWS(box.boundary_distance({5, 0, 0}));
  CHECK_THROWS(Domain::box(2, {0, 1, 0}, {1, 1, 0}));

  Domain hb = Domain::half_ball(3, 2);
  CHECK(hb.contains({0, 0, 1}));
  CHECK(!hb.contains({0, 0, -1}));
  CHECK(!hb.contains({0, 1.9, 0.7}));  // |x| > 2
  CHECK_ABS(hb.boundary_distance({0, 0, 1}), 1.0, 1e-15);
  CHECK_ABS(hb.boundary_distance({0, 0, 1.8}), 0.2, 1e-12);

  auto phi = [](const Point& xp) { return 0.05 * xp[0] * xp[0]; };
  Domain epi = Domain::graph_epigraph(2, phi, 0.4, {-4, -4, 0}, {4, 4, 0});
  CHECK(epi.contains({2, 0.25, 0}));  // phi(2) = 0.2
  CHECK(!epi.contains({2, 0.1, 0}));
  double bd = epi.boundary_distance({2, 0.25, 0});
  CHECK(bd > 0 && bd <= 0.05 + 1e-15);  // vertical clearance, Lipschitz-deflated

  // Difference = half-plane minus a ball: containment is the conjunction,
  // with the closed ball removed.
  Domain omega = Domain::difference(Domain::half_space(2), Domain::ball(2, {0, 5, 0}, 0.5));
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> U(-10.0, 10.0);
  for (int t = 0; t < 1000; ++t) {
    Point x{U(rng), U(rng), 0};
    double r2 = x[0] * x[0] + (x[1] - 5) * (x[1] - 5);
    bool expect = (x[1] > 0.0) && (r2 > 0.25);
    CHECK(omega.contains(x) == expect);
    if (omega.contains(x)) {
      double want = std::min(x[1], std::sqrt(r2) - 0.5);
      CHECK_ABS(omega.boundary_distance(x), want, 1e-12);
    }
  }
  CHECK_THROWS(omega.boundary_distance({0, 5.2, 0}));  // inside the hole
  CHECK_THROWS(omega.boundary_distance({0, -1, 0}));
}

static void grid_cases() {
  Grid g = Grid::line(0, 40, 512);
  CHECK(g.size() == 512);
  CHECK_ABS(g.h(), 0.078125, 0);
  CHECK_ABS(g.coord(0, 0), 0.0390625, 0);
  CHECK_ABS(g.node(511)[0], 40 - 0.0390625, 1e-12);
  Domain gb = g.box_domain();
  for (std::int64_t i = 0; i < g.size(); ++i) CHECK(gb.contains(g.node(i)));

  Grid q = Grid::plane(-20, 20, 96, 0, 40, 96);
  CHECK(q.size() == 9216);
  CHECK_REL(q.h(), 5.0 / 12.0, 1e-15);
  CHECK_REL(q.cell_volume(), 25.0 / 144.0, 1e-15);
  Point x = q.node(5 * 96 + 7);
  CHECK_ABS(x[0], q.coord(0, 5), 0);
  CHECK_ABS(x[1], q.coord(1, 7), 0);

  CHECK_THROWS(Grid::plane(0, 1, 10, 0, 2, 10));  // rectangular cells
  CHECK_THROWS(Grid(1, {0, 0, 0}, {1, 0, 0}, {0, 1, 1}));
}

static void field_cases() {
  auto gauss = [](const Point& x) { return std::exp(-x[0] * x[0]); };
  Field f = Field::analytic(1, gauss, {-8, 0, 0}, {8, 0, 0}, "gaussian");
  CHECK(f.family() == "gaussian");
  CHECK(!f.is_sampled());
  CHECK_ABS(f(0.5), std::exp(-0.25), 1e-16);

  Grid g = Grid::line(-8, 8, 256);
  Field s = sample(f, g);
  CHECK(s.is_sampled());
  CHECK(s.values().size() == 256);
  for (int i = 0; i < 256; i += 37) CHECK_ABS(s.values()[i], gauss(g.node(i)), 0);

  // idempotence: sampling a sampled field on the same grid is the identity
  Field s2 = sample(s, g);
  CHECK(s2.grid().same_as(g));
  CHECK((s2.values() == s.values()).all());

  CHECK_THROWS(sample(f, Grid::plane(0, 1, 4, 0, 1, 4)));  // dimension mismatch

  auto bad = [](const Point& x) { return x[0] == 0 ? 1.0 : 0.0 / 0.0; };
  CHECK_THROWS(sample(Field::analytic(1, bad, {-1, 0, 0}, {1, 0, 0}), g));

  Field fp = f.with_far_power({2.0, 1.5});
  CHECK(fp.far_power());
  CHECK_ABS(fp.far_power()->decay, 1.5, 0);
  Field sp = sample(fp, g);
  CHECK(sp.far_power() && sp.far_power()->amp == 2.0);

  auto c = [](const Point&) { return 3.25; };
  Field cs = sample(Field::analytic(2, c, {-1, -1, 0}, {1, 1, 0}), Grid::plane(-1, 1, 8, -1, 1, 8));
  CHECK((cs.values() == 3.25).all());
}

static void quad_cases() {
  CHECK_REL(gl_integrate(16, 0, 1, [](double x) { return x * x * x * x * x * x * x; }),
            0.125, 1e-14);
  CHECK_REL(gl_integrate(32, 0, 3.14159265358979323846, [](double x) { return std::sin(x); }),
            2.0, 1e-13);
  CHECK_REL(graded_integrate(16, 0, 1, 40, [](double x) { return 1.0 / std::sqrt(x); }),
            2.0, 1e-5);
  // bounded endpoint singularity (kinked derivative), the main use case
  CHECK_REL(graded_integrate(24, 0, 2, 40, [](double x) { return std::pow(x, 0.3); }),
            std::pow(2.0, 1.3) / 1.3, 1e-12);

  LineFit lf = fit_line({1, 2, 3, 4}, {5, 8, 11, 14});
  CHECK_ABS(lf.slope, 3.0, 1e-12);
  CHECK_ABS(lf.intercept, 2.0, 1e-12);
  CHECK_ABS(lf.r2, 1.0, 1e-12);
  CHECK_THROWS(fit_line({1}, {2}));
  CHECK_THROWS(fit_line({2, 2, 2}, {1, 2, 3}));
}

static void parallel_cases() {
  auto term = [](std::int64_t i) { return std::sin(double(i)) / double(i + 1); };
  double s1 = parallel_sum(100000, term, 1);
  double s3 = parallel_sum(100000, term, 3);
  double s8 = parallel_sum(100000, term, 8);
  CHECK(s1 == s3);  // bit-identical regardless of worker count
  CHECK(s3 == s8);

  std::vector<int> hit(5000, 0);
  parallel_chunks(5000, [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t i = b; i < e; ++i) hit[size_t(i)] += 1;
  });
  bool once = true;
  for (int v : hit) once = once && (v == 1);
  CHECK(once);

  CHECK(worker_count(5) == 5);
  setenv("FSQLAB_WORKERS", "3", 1);
  CHECK(worker_count() == 3);
  CHECK(worker_count(2) == 2);  // explicit override beats the env var
  setenv("FSQLAB_WORKERS", "garbage", 1);
  CHECK(worker_count() >= 1);
  unsetenv("FSQLAB_WORKERS");
  CHECK(worker_count() >= 1);
}

int main() {
  params_cases();
  domain_cases();
  grid_cases();
  field_cases();
  quad_cases();
  parallel_cases();
  return test_summary("test_core");
}
