#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "cdust/geometry.hpp"

namespace cdust {

/// Strictly increasing grid levels m_1 < ... < m_K with K >= 3; scale
/// delta_k = side * 2^(-m_k).
class ScaleSchedule {
 public:
  explicit ScaleSchedule(std::vector<int> levels);  // throws ParameterError
  static ScaleSchedule range(int lo, int hi);       // inclusive

  const std::vector<int>& levels() const noexcept { return levels_; }
  int coarsest() const { return levels_.front(); }
  int finest() const { return levels_.back(); }

 private:
  std::vector<int> levels_;
};

using BoxCounts = std::map<int, std::uint64_t>;

/// Inclusive level window of a fit.
struct FitWindow {
  int lo = 0;
  int hi = 0;
  friend bool operator==(FitWindow, FitWindow) = default;
};

struct DimensionEstimate {
  BoxCounts counts;
  double bounds_side = 1.0;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
  FitWindow window;
  bool empty = false;       // every count is zero
  bool degenerate = false;  // no variance in log N; r2 reported as 1
};

/// Occupied-cell counts of `grid` at each scheduled level (OR-reduction of
/// the grid). Levels above grid.level() are rejected with ParameterError.
BoxCounts box_counts(const BoxGrid& grid, const ScaleSchedule& schedule);

/// Counts for an exact square union over `bounds`, at any level (levels up
/// to 12 use a dense bitmap, finer ones a sorted cell list).
BoxCounts box_counts(std::span<const Square> squares, const Square& bounds, const ScaleSchedule& schedule);
BoxCounts box_counts(std::span<const Quad> quads, const Square& bounds, const ScaleSchedule& schedule);

/// Drops the coarsest level and the two finest; if that would leave fewer
/// than three levels, the whole range is used.
FitWindow default_window(const std::vector<int>& levels);

/// default_window, then also skips leading levels where every cell is
/// occupied (N = 4^m), keeping at least three levels.
FitWindow default_window(const BoxCounts& counts);

/// OLS of log N against log(1/delta) over `window` (default_window when
/// omitted). Throws ParameterError when fewer than three levels fall inside.
DimensionEstimate estimate_dimension(const BoxCounts& counts, double bounds_side = 1.0,
                                     std::optional<FitWindow> window = std::nullopt);

/// Summed-area table over a grid's finest level; answers "is any cell in this
/// rectangle occupied" in O(1), which makes windowed counts at every coarser
/// level cheap.
class OccupancyIndex {
 public:
  explicit OccupancyIndex(const BoxGrid& grid);

  const BoxGrid& grid() const noexcept { return grid_; }
  /// Occupied fine cells in [i0, i1) x [j0, j1).
  std::uint64_t occupied(std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1) const;

  /// Level-m cells (m <= grid level) holding an occupied fine cell inside the
  /// fine-cell rectangle [i0, i1) x [j0, j1).
  std::uint64_t count_at_level(int m, std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1) const;

 private:
  const BoxGrid& grid_;
  std::size_t n_;
  std::vector<std::uint32_t> sat_;  // (n+1)^2
};

/// Fine-cell rectangle [i0, i1) x [j0, j1) of the cells meeting the open
/// Chebyshev ball B(p, r) with positive area; empty when it misses the grid.
struct CellRect {
  std::size_t i0 = 0, i1 = 0, j0 = 0, j1 = 0;
  bool empty() const { return i0 >= i1 || j0 >= j1; }
};
CellRect ball_cells(const BoxGrid& grid, Vec2 p, double r);

/// Levels used for a local estimate in a ball of radius r: from the first
/// level whose cells fit inside the ball (cell <= 2r) to the grid level, at
/// most `max_levels` of them.
std::vector<int> local_levels(const BoxGrid& grid, double r, int max_levels = 8);

/// Box-count estimate of set ∩ B(p, r) (square ball) over local_levels.
/// An empty intersection yields an estimate flagged `empty` with slope 0.
/// Throws ParameterError when fewer than three local levels exist.
DimensionEstimate local_dimension(const OccupancyIndex& index, Vec2 p, double r);

/// k-th entry is local_dimension at radii[k]. Radii must be decreasing.
std::vector<DimensionEstimate> local_dimension_profile(const BoxGrid& set, Vec2 p,
                                                       std::span<const double> radii);

struct FullDimensionPoint {
  Vec2 point;
  std::size_t cell_i = 0;
  std::size_t cell_j = 0;
  double min_local_slope = 0.0;
};

/// Point of the set whose minimum local slope over a fixed radius ladder
/// (side/4, side/8, side/16, when the grid resolves them) is largest.
/// Candidates are the occupied cells of a coarse level, each represented by
/// the occupied fine cell nearest its centre; ties go to the first candidate
/// in row-major order (bottom row first). Throws DomainError on an empty set.
FullDimensionPoint find_full_dimension_point(const BoxGrid& set);

}  // namespace cdust
