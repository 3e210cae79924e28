#pragma once

#include "cdust/geometry.hpp"

namespace cdust {

/// Planar isometry sigma(x) = g(x) + z, where g is the orthogonal map
/// "reflect across the x-axis (if `reflect`), then rotate by `theta`".
struct Isometry {
  double theta = 0.0;  // [0, 2*pi)
  bool reflect = false;
  Vec2 z{};

  static Isometry identity() { return {}; }
  static Isometry translation(Vec2 t) { return {0.0, false, t}; }
  static Isometry rotation(double theta) { return {theta, false, {}}; }

  /// Orthogonal part only.
  Vec2 linear(Vec2 p) const;
  Vec2 apply(Vec2 p) const;
  Quad apply(const Square& s) const;
  Quad apply(const Quad& q) const;
};

}  // namespace cdust
