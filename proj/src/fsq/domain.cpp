#include "fsq/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fsq {

Domain Domain::whole_space(int n) {
  Domain d;
  d.kind_ = Kind::WholeSpace;
  d.n_ = n;
  return d;
}

Domain Domain::half_space(int n) {
  Domain d;
  d.kind_ = Kind::HalfSpace;
  d.n_ = n;
  return d;
}

Domain Domain::ball(int n, Point center, double radius) {
  if (radius <= 0) throw std::invalid_argument("ball: radius must be positive");
  Domain d;
  d.kind_ = Kind::Ball;
  d.n_ = n;
  d.lo_ = center;
  d.radius_ = radius;
  return d;
}

Domain Domain::half_ball(int n, double radius) {
  if (radius <= 0) throw std::invalid_argument("half_ball: radius must be positive");
  Domain d;
  d.kind_ = Kind::HalfBall;
  d.n_ = n;
  d.radius_ = radius;
  return d;
}

Domain Domain::box(int n, Point lo, Point hi) {
  for (int i = 0; i < n; ++i)
    if (!(lo[i] < hi[i])) throw std::invalid_argument("box: lo < hi required per axis");
  Domain d;
  d.kind_ = Kind::Box;
  d.n_ = n;
  d.lo_ = lo;
  d.hi_ = hi;
  return d;
}

Domain Domain::graph_epigraph(int n, std::function<double(const Point&)> phi,
                              double lip, Point box_lo, Point box_hi) {
  Domain d;
  d.kind_ = Kind::GraphEpigraph;
  d.n_ = n;
  d.phi_ = std::move(phi);
  d.lip_ = lip;
  d.lo_ = box_lo;
  d.hi_ = box_hi;
  return d;
}

Domain Domain::difference(Domain outer, Domain inner) {
  Domain d;
  d.kind_ = Kind::Difference;
  d.n_ = outer.n_;
  d.sub_[0] = std::make_shared<Domain>(std::move(outer));
  d.sub_[1] = std::make_shared<Domain>(std::move(inner));
  return d;
}

static double norm2(const Point& x, int n) {
  double s = 0;
  for (int i = 0; i < n; ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

bool Domain::contains(const Point& x) const {
  switch (kind_) {
    case Kind::WholeSpace:
      return true;
    case Kind::HalfSpace:
      return x[n_ - 1] > 0.0;
    case Kind::Ball: {
      Point r = x;
      for (int i = 0; i < n_; ++i) r[i] -= lo_[i];
      return norm2(r, n_) < radius_;
    }
    case Kind::HalfBall:
      return x[n_ - 1] > 0.0 && norm2(x, n_) < radius_;
    case Kind::Box:
      for (int i = 0; i < n_; ++i)
        if (!(x[i] > lo_[i] && x[i] < hi_[i])) return false;
      return true;
    case Kind::GraphEpigraph:
      return x[n_ - 1] > phi_(x);
    case Kind::Difference: {
      // in the outer set AND outside the closure of the inner set
      if (!sub_[0]->contains(x)) return false;
      if (sub_[1]->contains(x)) return false;
      // closure: exclude inner boundary points as well
      Point y = x;
      if (sub_[1]->kind_ == Kind::Ball) {
        for (int i = 0; i < n_; ++i) y[i] -= sub_[1]->lo_[i];
        return norm2(y, n_) > sub_[1]->radius_;
      }
      return true;  // for non-ball inner sets the open/closed distinction is measure zero
    }
  }
  return false;
}

double Domain::boundary_distance(const Point& x) const {
  if (!contains(x)) throw std::invalid_argument("boundary_distance: point outside domain");
  switch (kind_) {
    case Kind::WholeSpace:
      return std::numeric_limits<double>::infinity();
    case Kind::HalfSpace:
      return x[n_ - 1];
    case Kind::Ball: {
      Point r = x;
      for (int i = 0; i < n_; ++i) r[i] -= lo_[i];
      return radius_ - norm2(r, n_);
    }
    case Kind::HalfBall:
      return std::min(x[n_ - 1], radius_ - norm2(x, n_));
    case Kind::Box: {
      double d = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n_; ++i) d = std::min({d, x[i] - lo_[i], hi_[i] - x[i]});
      return d;
    }
    case Kind::GraphEpigraph: {
      // vertical clearance over-estimates distance by at most sqrt(1+L^2)
      double v = x[n_ - 1] - phi_(x);
      return v / std::sqrt(1.0 + lip_ * lip_);
    }
    case Kind::Difference: {
      double d0 = sub_[0]->boundary_distance(x);
      double d1;
      const Domain& in = *sub_[1];
      if (in.kind_ == Kind::Ball) {
        Point r = x;
        for (int i = 0; i < n_; ++i) r[i] -= in.lo_[i];
        d1 = norm2(r, n_) - in.radius_;
      } else if (in.kind_ == Kind::Box) {
        // distance from an exterior point to a box
        double s = 0;
        for (int i = 0; i < n_; ++i) {
          double t = std::max({in.lo_[i] - x[i], 0.0, x[i] - in.hi_[i]});
          s += t * t;
        }
        d1 = std::sqrt(s);
      } else {
        d1 = d0;  // conservative: no certified bound for exotic inner sets
      }
      return std::min(d0, d1);
    }
  }
  return 0.0;
}

}  // namespace fsq
