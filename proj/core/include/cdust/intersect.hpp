#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cdust/boxdim.hpp"
#include "cdust/cantor.hpp"
#include "cdust/geometry.hpp"
#include "cdust/isometry.hpp"
#include "cdust/rng.hpp"

namespace cdust {

/// Haar draw on O(2) (uniform angle, fair reflection coin) plus a translation
/// uniform on `window` (Lebesgue).
Isometry sample_isometry(Rng& rng, const Square& window);

/// Conservative raster of the image of a square set: an output cell is
/// occupied iff it overlaps the image of some input square with positive area.
BoxGrid apply_isometry(std::span<const Square> set, const Isometry& iso, const Square& out_bounds, int out_level);
BoxGrid apply_isometry(std::span<const Quad> set, const Isometry& iso, const Square& out_bounds, int out_level);
BoxGrid apply_isometry(const BoxGrid& set, const Isometry& iso, const Square& out_bounds, int out_level);

/// Box-count estimate of A ∩ B, where B has already been placed. Empty
/// intersections come back flagged `empty` with slope 0.
DimensionEstimate intersection_dimension(const BoxGrid& a, const BoxGrid& placed_b, const ScaleSchedule& schedule);

/// Same, placing a Cantor copy (centred convention, see place_centered) of
/// the given diameter with `iso` first.
DimensionEstimate intersection_dimension(const BoxGrid& a, const CantorApproximant& b, double b_diameter,
                                         const Isometry& iso, const ScaleSchedule& schedule);

enum class ReflectMode { kRandom, kForceOn, kForceOff };

struct MattilaConfig {
  std::size_t trials = 200;
  double tolerance = 0.15;
  std::uint64_t seed = 0;
  double b_diameter = 1.0;                   // diameter of the placed copy of B
  std::optional<Square> translation_window;  // default: A's bounds
  std::optional<ScaleSchedule> schedule;     // default: levels 1..A.level()
  ReflectMode reflect = ReflectMode::kRandom;
};

struct MattilaTrial {
  std::size_t index = 0;
  Isometry iso;
  double slope = 0.0;
  bool empty = false;
  bool hit = false;
};

struct MattilaSurvey {
  double s = 0.0;
  double t = 0.0;
  double threshold = 0.0;  // s + t - 2
  double tolerance = 0.0;
  std::size_t trials = 0;
  std::size_t hits = 0;
  double hit_fraction = 0.0;
  std::vector<MattilaTrial> records;
};

/// Throws ParameterError naming the first violated hypothesis among
/// 0 < s < 2, 0 < t < 2, s + t > 2, t > 3/2.
void check_mattila_hypotheses(double s, double t);

/// Runs `trials` independent isometries of B against A. s is the box-count
/// slope of A over the schedule, t = cantor_dimension(B.alpha). Trial k uses
/// RNG stream k of the seed, so results do not depend on the worker count.
MattilaSurvey mattila_survey(const BoxGrid& a, const CantorApproximant& b, const MattilaConfig& config);

/// Survey with an explicit s (skips estimating it from A).
MattilaSurvey mattila_survey(const BoxGrid& a, double s, const CantorApproximant& b, const MattilaConfig& config);

}  // namespace cdust
