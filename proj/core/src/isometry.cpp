#include "cdust/isometry.hpp"

#include <cmath>

namespace cdust {

Vec2 Isometry::linear(Vec2 p) const {
  if (reflect) p.y = -p.y;
  if (theta == 0.0) return p;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

Vec2 Isometry::apply(Vec2 p) const { return linear(p) + z; }

Quad Isometry::apply(const Square& s) const { return apply(Quad::from_square(s)); }

Quad Isometry::apply(const Quad& q) const {
  return Quad{{apply(q.v[0]), apply(q.v[1]), apply(q.v[2]), apply(q.v[3])}};
}

}  // namespace cdust
