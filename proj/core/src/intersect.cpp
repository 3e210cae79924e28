#include "cdust/intersect.hpp"

#include <cmath>
#include <numbers>

#include "cdust/errors.hpp"
#include "cdust/parallel.hpp"

namespace cdust {

Isometry sample_isometry(Rng& rng, const Square& window) {
  Isometry iso;
  iso.theta = 2.0 * std::numbers::pi * rng.uniform();
  iso.reflect = rng.coin();
  iso.z = {window.corner.x + window.side * rng.uniform(), window.corner.y + window.side * rng.uniform()};
  return iso;
}

BoxGrid apply_isometry(std::span<const Quad> set, const Isometry& iso, const Square& out_bounds, int out_level) {
  std::vector<Quad> moved;
  moved.reserve(set.size());
  for (const Quad& q : set) moved.push_back(iso.apply(q));
  return rasterize(std::span<const Quad>(moved), out_bounds, out_level);
}

BoxGrid apply_isometry(std::span<const Square> set, const Isometry& iso, const Square& out_bounds, int out_level) {
  std::vector<Quad> moved;
  moved.reserve(set.size());
  for (const Square& s : set) moved.push_back(iso.apply(s));
  return rasterize(std::span<const Quad>(moved), out_bounds, out_level);
}

BoxGrid apply_isometry(const BoxGrid& set, const Isometry& iso, const Square& out_bounds, int out_level) {
  std::vector<Square> cells;
  for (std::size_t j = 0; j < set.cells_per_side(); ++j) {
    for (std::size_t i = 0; i < set.cells_per_side(); ++i) {
      if (set.get(i, j)) cells.push_back(set.cell_square(i, j));
    }
  }
  return apply_isometry(std::span<const Square>(cells), iso, out_bounds, out_level);
}

DimensionEstimate intersection_dimension(const BoxGrid& a, const BoxGrid& placed_b, const ScaleSchedule& schedule) {
  const BoxGrid both = grid_intersection(a, placed_b);
  return estimate_dimension(box_counts(both, schedule), a.bounds().side);
}

DimensionEstimate intersection_dimension(const BoxGrid& a, const CantorApproximant& b, double b_diameter,
                                         const Isometry& iso, const ScaleSchedule& schedule) {
  const auto quads = place_centered(b, b_diameter, iso);
  const BoxGrid placed = rasterize(std::span<const Quad>(quads), a.bounds(), a.level());
  return intersection_dimension(a, placed, schedule);
}

void check_mattila_hypotheses(double s, double t) {
  if (!(s > 0.0 && s < 2.0)) throw ParameterError("hypothesis 0 < s < 2 violated (s = " + std::to_string(s) + ")");
  if (!(t > 0.0 && t < 2.0)) throw ParameterError("hypothesis 0 < t < 2 violated (t = " + std::to_string(t) + ")");
  if (!(s + t > 2.0)) {
    throw ParameterError("hypothesis s + t > 2 violated (s + t = " + std::to_string(s + t) + ")");
  }
  if (!(t > 1.5)) throw ParameterError("hypothesis t > 3/2 violated (t = " + std::to_string(t) + ")");
}

MattilaSurvey mattila_survey(const BoxGrid& a, double s, const CantorApproximant& b, const MattilaConfig& config) {
  const double t = cantor_dimension(b.alpha());
  check_mattila_hypotheses(s, t);
  const ScaleSchedule schedule = config.schedule ? *config.schedule : ScaleSchedule::range(1, a.level());
  for (const auto& [m, n] : box_counts(a, schedule)) {
    if (n == 0) throw ParameterError("set A has no occupied cells at level " + std::to_string(m));
  }
  if (b.size() == 0) throw ParameterError("set B is empty");
  const Square window = config.translation_window ? *config.translation_window : a.bounds();

  // B is placed once in its centred frame; each trial only moves the quads.
  const std::vector<Quad> centred = place_centered(b, config.b_diameter, Isometry::identity());

  MattilaSurvey survey;
  survey.s = s;
  survey.t = t;
  survey.threshold = s + t - 2.0;
  survey.tolerance = config.tolerance;
  survey.trials = config.trials;
  survey.records.resize(config.trials);
  parallel_for(config.trials, [&](std::size_t k) {
    Rng rng = Rng::for_stream(config.seed, k);
    Isometry iso = sample_isometry(rng, window);
    if (config.reflect == ReflectMode::kForceOn) iso.reflect = true;
    if (config.reflect == ReflectMode::kForceOff) iso.reflect = false;
    const BoxGrid placed = apply_isometry(std::span<const Quad>(centred), iso, a.bounds(), a.level());
    const DimensionEstimate est = intersection_dimension(a, placed, schedule);
    MattilaTrial& rec = survey.records[k];
    rec.index = k;
    rec.iso = iso;
    rec.slope = est.slope;
    rec.empty = est.empty;
    rec.hit = !est.empty && est.slope >= survey.threshold - config.tolerance;
  });
  for (const auto& rec : survey.records) survey.hits += rec.hit ? 1 : 0;
  survey.hit_fraction =
      config.trials == 0 ? 0.0 : static_cast<double>(survey.hits) / static_cast<double>(config.trials);
  return survey;
}

MattilaSurvey mattila_survey(const BoxGrid& a, const CantorApproximant& b, const MattilaConfig& config) {
  const ScaleSchedule schedule = config.schedule ? *config.schedule : ScaleSchedule::range(1, a.level());
  const DimensionEstimate sa = estimate_dimension(box_counts(a, schedule), a.bounds().side);
  return mattila_survey(a, sa.slope, b, config);
}

}  // namespace cdust
