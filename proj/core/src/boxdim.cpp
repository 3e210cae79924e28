#include "cdust/boxdim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cdust/detail/cells.hpp"
#include "cdust/errors.hpp"

namespace cdust {

ScaleSchedule::ScaleSchedule(std::vector<int> levels) : levels_(std::move(levels)) {
  if (levels_.size() < 3) throw ParameterError("a scale schedule needs at least three levels");
  if (levels_.front() < 0) throw ParameterError("schedule levels must be non-negative");
  for (std::size_t k = 1; k < levels_.size(); ++k) {
    if (levels_[k] <= levels_[k - 1]) throw ParameterError("schedule levels must be strictly increasing");
  }
}

ScaleSchedule ScaleSchedule::range(int lo, int hi) {
  std::vector<int> v;
  for (int m = lo; m <= hi; ++m) v.push_back(m);
  return ScaleSchedule(std::move(v));
}

BoxCounts box_counts(const BoxGrid& grid, const ScaleSchedule& schedule) {
  if (schedule.finest() > grid.level()) {
    throw ParameterError("schedule level " + std::to_string(schedule.finest()) + " exceeds grid level " +
                         std::to_string(grid.level()));
  }
  BoxCounts out;
  for (int m : schedule.levels()) {
    out[m] = m == grid.level() ? grid.count() : grid.downsample(m).count();
  }
  return out;
}

namespace {

std::uint64_t sparse_count(std::span<const Square> squares, const Square& bounds, int m) {
  const std::size_t n = std::size_t{1} << m;
  std::vector<std::uint64_t> keys;
  for (const Square& s : squares) {
    auto rx = detail::axis_range(s.corner.x, s.corner.x + s.side, bounds.corner.x, bounds.side, n, 0.0);
    if (!rx) continue;
    auto ry = detail::axis_range(s.corner.y, s.corner.y + s.side, bounds.corner.y, bounds.side, n, 0.0);
    if (!ry) continue;
    for (std::size_t j = ry->first; j <= ry->last; ++j) {
      for (std::size_t i = rx->first; i <= rx->last; ++i) keys.push_back((std::uint64_t{j} << 32) | i);
    }
  }
  std::sort(keys.begin(), keys.end());
  return static_cast<std::uint64_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

constexpr int kDenseLevelLimit = 12;

}  // namespace

BoxCounts box_counts(std::span<const Square> squares, const Square& bounds, const ScaleSchedule& schedule) {
  BoxCounts out;
  for (int m : schedule.levels()) {
    if (m <= kDenseLevelLimit) {
      out[m] = rasterize(squares, bounds, m).count();
    } else {
      if (m > 31) throw ResourceError("box-count level above 31");
      out[m] = sparse_count(squares, bounds, m);
    }
  }
  return out;
}

BoxCounts box_counts(std::span<const Quad> quads, const Square& bounds, const ScaleSchedule& schedule) {
  BoxCounts out;
  for (int m : schedule.levels()) out[m] = rasterize(quads, bounds, m).count();
  return out;
}

FitWindow default_window(const std::vector<int>& levels) {
  if (levels.empty()) return {};
  if (levels.size() >= 6) return {levels[1], levels[levels.size() - 3]};
  return {levels.front(), levels.back()};
}

FitWindow default_window(const BoxCounts& counts) {
  std::vector<int> levels;
  for (const auto& [m, n] : counts) levels.push_back(m);
  FitWindow w = default_window(levels);
  // A level with every cell occupied says nothing about the set below it.
  auto inside = [&](int lo) {
    return std::count_if(levels.begin(), levels.end(), [&](int m) { return m >= lo && m <= w.hi; });
  };
  for (const auto& [m, n] : counts) {
    if (m < w.lo) continue;
    if (m >= 31 || n != (std::uint64_t{1} << (2 * m))) break;
    auto next = std::upper_bound(levels.begin(), levels.end(), m);
    if (next == levels.end() || inside(*next) < 3) break;
    w.lo = *next;
  }
  return w;
}

DimensionEstimate estimate_dimension(const BoxCounts& counts, double bounds_side, std::optional<FitWindow> window) {
  DimensionEstimate est;
  est.counts = counts;
  est.bounds_side = bounds_side;
  std::vector<int> levels;
  for (const auto& [m, n] : counts) levels.push_back(m);
  est.window = window ? *window : default_window(counts);

  std::vector<double> xs;
  std::vector<double> ys;
  std::size_t zeros = 0;
  for (const auto& [m, n] : counts) {
    if (m < est.window.lo || m > est.window.hi) continue;
    xs.push_back(m * std::numbers::ln2 - std::log(bounds_side));
    ys.push_back(n == 0 ? 0.0 : std::log(static_cast<double>(n)));
    if (n == 0) ++zeros;
  }
  if (xs.size() < 3) {
    throw ParameterError("dimension fit needs at least three levels in the window, got " +
                         std::to_string(xs.size()));
  }
  if (zeros == xs.size()) {
    est.empty = true;
    est.degenerate = true;
    return est;
  }
  if (zeros != 0) throw ParameterError("box counts mix empty and non-empty levels");

  const double k = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  est.slope = sxy / sxx;
  est.intercept = my - est.slope * mx;
  if (syy == 0.0) {
    est.degenerate = true;
    est.r2 = 1.0;
  } else {
    est.r2 = std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  }
  return est;
}

// ---------------------------------------------------------------------------
// Local estimates

OccupancyIndex::OccupancyIndex(const BoxGrid& grid) : grid_(grid), n_(grid.cells_per_side()) {
  const std::size_t w = n_ + 1;
  sat_.assign(w * w, 0);
  for (std::size_t j = 0; j < n_; ++j) {
    std::uint32_t row = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      row += grid.get(i, j) ? 1U : 0U;
      sat_[(j + 1) * w + (i + 1)] = sat_[j * w + (i + 1)] + row;
    }
  }
}

std::uint64_t OccupancyIndex::occupied(std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1) const {
  if (i0 >= i1 || j0 >= j1) return 0;
  const std::size_t w = n_ + 1;
  return std::uint64_t{sat_[j1 * w + i1]} + sat_[j0 * w + i0] - sat_[j0 * w + i1] - sat_[j1 * w + i0];
}

std::uint64_t OccupancyIndex::count_at_level(int m, std::size_t i0, std::size_t i1, std::size_t j0,
                                             std::size_t j1) const {
  if (m > grid_.level() || m < 0) throw ParameterError("level outside the indexed grid");
  if (i0 >= i1 || j0 >= j1) return 0;
  const int shift = grid_.level() - m;
  std::uint64_t total = 0;
  for (std::size_t cj = j0 >> shift; cj <= (j1 - 1) >> shift; ++cj) {
    const std::size_t fj0 = std::max(j0, cj << shift);
    const std::size_t fj1 = std::min(j1, (cj + 1) << shift);
    for (std::size_t ci = i0 >> shift; ci <= (i1 - 1) >> shift; ++ci) {
      const std::size_t fi0 = std::max(i0, ci << shift);
      const std::size_t fi1 = std::min(i1, (ci + 1) << shift);
      if (occupied(fi0, fi1, fj0, fj1) != 0) ++total;
    }
  }
  return total;
}

CellRect ball_cells(const BoxGrid& grid, Vec2 p, double r) {
  const Square& b = grid.bounds();
  const std::size_t n = grid.cells_per_side();
  auto rx = detail::axis_range(p.x - r, p.x + r, b.corner.x, b.side, n, 0.0);
  auto ry = detail::axis_range(p.y - r, p.y + r, b.corner.y, b.side, n, 0.0);
  if (!rx || !ry) return {};
  return {rx->first, rx->last + 1, ry->first, ry->last + 1};
}

std::vector<int> local_levels(const BoxGrid& grid, double r, int max_levels) {
  const double ratio = grid.bounds().side / (2.0 * r);
  int m0 = ratio <= 1.0 ? 0 : static_cast<int>(std::ceil(std::log2(ratio) - 1e-12));
  std::vector<int> out;
  for (int m = m0; m <= grid.level() && static_cast<int>(out.size()) < max_levels; ++m) out.push_back(m);
  return out;
}

DimensionEstimate local_dimension(const OccupancyIndex& index, Vec2 p, double r) {
  const BoxGrid& grid = index.grid();
  const auto levels = local_levels(grid, r);
  if (levels.size() < 3) {
    throw ParameterError("radius too small for a local estimate at grid level " + std::to_string(grid.level()));
  }
  const CellRect rect = ball_cells(grid, p, r);
  BoxCounts counts;
  for (int m : levels) counts[m] = index.count_at_level(m, rect.i0, rect.i1, rect.j0, rect.j1);
  // The coarsest ball level covers only a few cells; skip it when possible.
  const int lo = levels.size() >= 4 ? levels[1] : levels.front();
  return estimate_dimension(counts, grid.bounds().side, FitWindow{lo, levels.back()});
}

std::vector<DimensionEstimate> local_dimension_profile(const BoxGrid& set, Vec2 p, std::span<const double> radii) {
  if (!set.bounds().contains(p)) throw ParameterError("profile centre lies outside the grid bounds");
  for (std::size_t k = 1; k < radii.size(); ++k) {
    if (!(radii[k] < radii[k - 1])) throw ParameterError("profile radii must be strictly decreasing");
  }
  const OccupancyIndex index(set);
  std::vector<DimensionEstimate> out;
  out.reserve(radii.size());
  for (double r : radii) out.push_back(local_dimension(index, p, r));
  return out;
}

FullDimensionPoint find_full_dimension_point(const BoxGrid& set) {
  if (set.empty()) throw DomainError("cannot pick a point of an empty set");
  const OccupancyIndex index(set);
  const int fine = set.level();
  const int coarse = std::min(fine, 4);
  const int shift = fine - coarse;
  const std::size_t nc = std::size_t{1} << coarse;

  std::vector<double> ladder;
  for (int k = 2; k <= 4; ++k) {
    const double r = set.bounds().side * std::ldexp(1.0, -k);
    if (local_levels(set, r).size() >= 3) ladder.push_back(r);
  }

  FullDimensionPoint best;
  bool have = false;
  for (std::size_t cj = 0; cj < nc; ++cj) {
    for (std::size_t ci = 0; ci < nc; ++ci) {
      const std::size_t i0 = ci << shift, i1 = (ci + 1) << shift;
      const std::size_t j0 = cj << shift, j1 = (cj + 1) << shift;
      if (index.occupied(i0, i1, j0, j1) == 0) continue;
      // Representative: occupied fine cell nearest the coarse cell centre.
      const double mid_i = (static_cast<double>(i0) + static_cast<double>(i1)) / 2.0 - 0.5;
      const double mid_j = (static_cast<double>(j0) + static_cast<double>(j1)) / 2.0 - 0.5;
      std::size_t bi = 0, bj = 0;
      double bd = -1.0;
      for (std::size_t j = j0; j < j1; ++j) {
        for (std::size_t i = i0; i < i1; ++i) {
          if (!set.get(i, j)) continue;
          const double d = std::hypot(static_cast<double>(i) - mid_i, static_cast<double>(j) - mid_j);
          if (bd < 0.0 || d < bd) {
            bd = d;
            bi = i;
            bj = j;
          }
        }
      }
      const Vec2 p = set.cell_center(bi, bj);
      double score = ladder.empty() ? 0.0 : 1e300;
      for (double r : ladder) {
        const auto est = local_dimension(index, p, r);
        score = std::min(score, est.empty ? 0.0 : est.slope);
      }
      if (!have || score > best.min_local_slope) {
        best = {p, bi, bj, score};
        have = true;
      }
    }
  }
  return best;
}

}  // namespace cdust
