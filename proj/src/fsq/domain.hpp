#pragma once
#include <array>
#include <functional>
#include <memory>
#include <stdexcept>

namespace fsq {

using Point = std::array<double, 3>;  // coordinates beyond n are ignored

// Geometric region with open-set semantics: points exactly on a boundary
// count as outside.  HalfSpace is { x_n > 0 }.
class Domain {
 public:
  enum class Kind { WholeSpace, HalfSpace, Ball, HalfBall, Box, GraphEpigraph, Difference };

  static Domain whole_space(int n);
  static Domain half_space(int n);
  static Domain ball(int n, Point center, double radius);
  static Domain half_ball(int n, double radius);  // Ball(0,r) intersect { x_n > 0 }
  static Domain box(int n, Point lo, Point hi);
  // epigraph { x_n > phi(x') }; lip is a caller-supplied bound on |grad phi|
  // over the bounding box, used for certified boundary distances.
  static Domain graph_epigraph(int n, std::function<double(const Point&)> phi,
                               double lip, Point box_lo, Point box_hi);
  static Domain difference(Domain outer, Domain inner);

  Kind kind() const { return kind_; }
  int dim() const { return n_; }

  bool contains(const Point& x) const;
  // Euclidean distance to the complement; exact for ball/box/half-space
  // variants, a certified lower bound for GraphEpigraph.  Throws if x is
  // outside the domain.
  double boundary_distance(const Point& x) const;

  // accessors used by the quadrature code
  const Point& center() const { return lo_; }
  double radius() const { return radius_; }
  const Point& lo() const { return lo_; }
  const Point& hi() const { return hi_; }
  const Domain& outer() const { return *sub_[0]; }
  const Domain& inner() const { return *sub_[1]; }
  double phi(const Point& xp) const { return phi_(xp); }
  double lipschitz() const { return lip_; }

 private:
  Domain() = default;
  Kind kind_ = Kind::WholeSpace;
  int n_ = 1;
  Point lo_{0, 0, 0}, hi_{0, 0, 0};  // box corners, or ball center in lo_
  double radius_ = 0.0;
  double lip_ = 0.0;
  std::function<double(const Point&)> phi_;
  std::array<std::shared_ptr<const Domain>, 2> sub_;
};

}  // namespace fsq
