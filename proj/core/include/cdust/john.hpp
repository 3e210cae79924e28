#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cdust/geometry.hpp"

namespace cdust {

// Ring decomposition of the unit square minus C_alpha.
//
// Every generation-k square Q (k >= 1) is surrounded by the ring curve
// gamma_Q: the boundary of the concentric square whose margin on each side is
// half the gap to Q's siblings, alpha^(k-1) (1 - 2 alpha) / 2. The four child
// curves of a square therefore tile a square concentric with it, and the ring
// R_Q is the closed region inside gamma_Q not strictly inside any child curve:
// a square frame plus the two lines where the child curves meet. The base
// curve (generation 0) has margin (1 - 2 alpha) / 2 around the unit square.
//
// At approximation depth n the generation-n squares are leaves: the region
// between a leaf square and its own curve is reported as the leaf ring of
// that square.

/// Margin of gamma_Q around a generation-k square.
double ring_margin(Alpha alpha, std::size_t generation);

/// The closed square bounded by gamma_Q.
Square ring_square(const SquareAddress& q);

/// Square bounded by the base curve (side 1 + (1 - 2 alpha)).
Square base_square(Alpha alpha);

struct RingLocation {
  bool exterior = false;       // outside the base square
  std::size_t generation = 0;  // generation of Q
  std::vector<Quadrant> word;  // address of Q
  bool leaf = false;           // Q is a generation-n square at the working depth
};

/// Deepest ring containing z: descends into a child while z lies strictly
/// inside its curve. Throws UndeterminedError when z lies in a generation-n
/// square.
RingLocation ring_of_point(Vec2 z, Alpha alpha, std::size_t depth);

struct JohnPath {
  Vec2 source;
  std::vector<Vec2> vertices;  // vertices.front() == source; consecutive vertices distinct
  /// Generation of the ring curve reached at vertices[k + 1].
  std::vector<std::size_t> generations;

  double length() const;
};

/// Polyline from z1 to the base curve: inside each ring, a straight segment
/// perpendicular to the nearest side of that ring's curve, then up to the
/// parent ring, until the base curve is reached. Points outside the base
/// square get a single segment to its boundary.
JohnPath build_john_path(Vec2 z1, Alpha alpha, std::size_t depth);

/// Euclidean distance from p to the union of generation-n squares
/// (branch and bound over the address tree; 0 inside a square).
double distance_to_approximant(Vec2 p, Alpha alpha, std::size_t depth);

struct JohnSample {
  Vec2 source;
  double worst_ratio = 0.0;
  std::size_t generation = 0;
  double length_ratio = 0.0;  // path length / distance from source to the base curve
};

struct JohnReport {
  double epsilon = 0.0;
  double max_length_ratio = 0.0;
  std::vector<JohnSample> samples;
};

/// Samples z1 uniformly in the unit square outside the generation-n squares,
/// builds each path and evaluates d(gamma(t), A_n) / |gamma(t) - z1| at steps
/// of at most alpha^n / 8. epsilon is the smallest ratio seen.
JohnReport verify_john(Alpha alpha, std::size_t depth, std::size_t samples, std::uint64_t seed);

struct RingBoundCheck {
  std::size_t samples = 0;
  std::size_t ring_samples = 0;  // samples that fell in a non-leaf ring
  std::size_t violations = 0;
  /// min over ring samples of distance / (alpha^k (1 - 2 alpha) / 2).
  double min_normalized_distance = 0.0;
};

/// Checks that points of every non-leaf ring R_Q of generation k lie farther
/// than alpha^k (1 - 2 alpha) / 2 from the depth-n approximant.
RingBoundCheck check_ring_distance_bound(Alpha alpha, std::size_t depth, std::size_t samples,
                                         std::uint64_t seed);

}  // namespace cdust
