#include "fsq/field.hpp"

namespace fsq {

Field Field::sampled(Grid g, Eigen::ArrayXd values) {
  if (values.size() != g.size())
    throw std::invalid_argument("Field::sampled: value count does not match grid");
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i]))
      throw std::invalid_argument("Field::sampled: non-finite sample");
  Field u;
  u.n_ = g.n;
  u.sampled_ = true;
  u.grid_ = g;
  u.values_ = std::move(values);
  u.box_lo_ = g.lo;
  u.box_hi_ = g.hi;
  u.family_ = "sampled";
  return u;
}

Field sample(const Field& f, const Grid& g) {
  if (f.dim() != g.n) throw std::invalid_argument("sample: dimension mismatch");
  if (f.is_sampled() && f.grid().same_as(g)) return f;  // idempotence
  Eigen::ArrayXd v(g.size());
  for (std::int64_t i = 0; i < g.size(); ++i) v[i] = f(g.node(i));
  Field out = Field::sampled(g, std::move(v));
  if (f.far_power()) out = out.with_far_power(*f.far_power());
  return out;
}

}  // namespace fsq
