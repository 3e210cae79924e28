#include "cdust/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cdust/detail/cells.hpp"
#include "cdust/errors.hpp"

namespace cdust {

double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double norm(Vec2 a) { return std::hypot(a.x, a.y); }
double distance(Vec2 a, Vec2 b) { return norm(a - b); }

Alpha::Alpha(double value) : value_(value) {
  if (!(value > 0.0 && value < 0.5)) {
    throw DomainError("alpha must satisfy 0 < alpha < 1/2, got " + std::to_string(value));
  }
}

char quadrant_letter(Quadrant q) { return static_cast<char>('A' + static_cast<int>(q)); }

Quadrant quadrant_from_letter(char c) {
  if (c < 'A' || c > 'D') {
    throw FormatError(std::string("invalid quadrant letter '") + c + "'");
  }
  return static_cast<Quadrant>(c - 'A');
}

bool Square::contains(Vec2 p) const {
  return p.x >= corner.x && p.x <= corner.x + side && p.y >= corner.y && p.y <= corner.y + side;
}

Quad Quad::from_square(const Square& s) {
  const Vec2 c = s.corner;
  return Quad{{c, {c.x + s.side, c.y}, {c.x + s.side, c.y + s.side}, {c.x, c.y + s.side}}};
}

SquareAddress SquareAddress::from_index(std::uint64_t index, std::size_t generation, Alpha alpha) {
  std::vector<Quadrant> word(generation);
  for (std::size_t k = generation; k-- > 0;) {
    word[k] = static_cast<Quadrant>(index & 3U);
    index >>= 2;
  }
  return SquareAddress(std::move(word), alpha);
}

SquareAddress SquareAddress::child(Quadrant q) const {
  auto w = word_;
  w.push_back(q);
  return SquareAddress(std::move(w), alpha_);
}

Square square_of_address(const SquareAddress& addr) {
  const long double a = addr.alpha().value();
  long double x = 0.0L;
  long double y = 0.0L;
  long double scale = 1.0L;  // a^(k-1)
  for (Quadrant q : addr.word()) {
    const long double step = scale - scale * a;
    const auto bits = static_cast<unsigned>(q);
    if (bits & 1U) x += step;
    if (bits & 2U) y += step;
    scale *= a;
  }
  const long double side = std::pow(a, static_cast<long double>(addr.generation()));
  return Square{{static_cast<double>(x), static_cast<double>(y)}, static_cast<double>(side)};
}

// ---------------------------------------------------------------------------
// BoxGrid

BoxGrid::BoxGrid(Square bounds, int level) : bounds_(bounds), level_(level) {
  if (level < 0 || level > kMaxLevel) {
    throw ResourceError("grid level must be in [0, " + std::to_string(kMaxLevel) + "], got " +
                        std::to_string(level));
  }
  if (!(bounds.side > 0.0)) throw DomainError("grid bounds must have positive side");
  n_ = std::size_t{1} << level;
  bits_.assign(n_ * n_, 0);
}

std::size_t BoxGrid::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

namespace {

// Index of the cell containing coordinate t (in cell units) with the
// half-open convention and a closed last cell.
std::optional<std::size_t> point_index(double t, std::size_t n) {
  const auto nd = static_cast<double>(n);
  if (!(t >= 0.0) || t > nd) return std::nullopt;
  if (t == nd) return n - 1;
  return std::min(static_cast<std::size_t>(std::floor(t)), n - 1);
}

}  // namespace

namespace detail {

std::optional<AxisRange> axis_range(double lo, double hi, double origin, double side, std::size_t n,
                                    double tol) {
  const auto nd = static_cast<double>(n);
  const double t_lo = (lo - origin) / side * nd;
  const double t_hi = (hi - origin) / side * nd;
  if (!(t_hi > t_lo)) {
    auto i = point_index(t_lo, n);
    if (!i) return std::nullopt;
    return AxisRange{*i, *i};
  }
  if (t_hi <= tol || t_lo >= nd - tol) return std::nullopt;
  const double f = std::floor(std::max(t_lo + tol, 0.0));
  const double l = std::ceil(std::min(t_hi - tol, nd)) - 1.0;
  if (l < f) {
    // Interval thinner than the tolerance: fall back to its containing cell.
    auto i = point_index(std::clamp(t_lo, 0.0, nd), n);
    if (!i) return std::nullopt;
    return AxisRange{*i, *i};
  }
  return AxisRange{static_cast<std::size_t>(f), std::min(static_cast<std::size_t>(l), n - 1)};
}

}  // namespace detail

namespace {

using detail::axis_range;

constexpr double kQuadTolerance = 1e-9;

// Projection interval overlap of a quad and an axis-aligned box along `axis`.
double projected_overlap(const Quad& q, Vec2 box_lo, Vec2 box_hi, Vec2 axis) {
  double qlo = dot(q.v[0], axis);
  double qhi = qlo;
  for (std::size_t k = 1; k < 4; ++k) {
    const double p = dot(q.v[k], axis);
    qlo = std::min(qlo, p);
    qhi = std::max(qhi, p);
  }
  const std::array<Vec2, 4> corners{box_lo, Vec2{box_hi.x, box_lo.y}, box_hi, Vec2{box_lo.x, box_hi.y}};
  double blo = dot(corners[0], axis);
  double bhi = blo;
  for (std::size_t k = 1; k < 4; ++k) {
    const double p = dot(corners[k], axis);
    blo = std::min(blo, p);
    bhi = std::max(bhi, p);
  }
  return std::min(qhi, bhi) - std::max(qlo, blo);
}

Vec2 edge_normal(Vec2 a, Vec2 b) {
  const Vec2 e = b - a;
  const double len = norm(e);
  if (len == 0.0) return {0.0, 0.0};
  return {-e.y / len, e.x / len};
}

}  // namespace

std::optional<std::array<std::size_t, 2>> BoxGrid::cell_of(Vec2 p) const {
  const auto nd = static_cast<double>(n_);
  auto i = point_index((p.x - bounds_.corner.x) / bounds_.side * nd, n_);
  auto j = point_index((p.y - bounds_.corner.y) / bounds_.side * nd, n_);
  if (!i || !j) return std::nullopt;
  return std::array<std::size_t, 2>{*i, *j};
}

Vec2 BoxGrid::cell_center(std::size_t i, std::size_t j) const {
  const double h = cell_size();
  return {bounds_.corner.x + (static_cast<double>(i) + 0.5) * h,
          bounds_.corner.y + (static_cast<double>(j) + 0.5) * h};
}

Square BoxGrid::cell_square(std::size_t i, std::size_t j) const {
  const double h = cell_size();
  return Square{{bounds_.corner.x + static_cast<double>(i) * h, bounds_.corner.y + static_cast<double>(j) * h}, h};
}

BoxGrid BoxGrid::downsample(int target_level) const {
  if (target_level > level_ || target_level < 0) {
    throw IncompatibleGridsError("cannot downsample level " + std::to_string(level_) + " to " +
                                 std::to_string(target_level));
  }
  BoxGrid out(bounds_, target_level);
  const int shift = level_ - target_level;
  for (std::size_t j = 0; j < n_; ++j) {
    for (std::size_t i = 0; i < n_; ++i) {
      if (bits_[j * n_ + i]) out.set(i >> shift, j >> shift);
    }
  }
  return out;
}

void rasterize_into(BoxGrid& grid, std::span<const Square> squares) {
  const Square& b = grid.bounds();
  const std::size_t n = grid.cells_per_side();
  for (const Square& s : squares) {
    auto rx = axis_range(s.corner.x, s.corner.x + s.side, b.corner.x, b.side, n, 0.0);
    if (!rx) continue;
    auto ry = axis_range(s.corner.y, s.corner.y + s.side, b.corner.y, b.side, n, 0.0);
    if (!ry) continue;
    for (std::size_t j = ry->first; j <= ry->last; ++j) {
      for (std::size_t i = rx->first; i <= rx->last; ++i) grid.set(i, j);
    }
  }
}

void rasterize_into(BoxGrid& grid, std::span<const Quad> quads) {
  const Square& b = grid.bounds();
  const std::size_t n = grid.cells_per_side();
  const double h = grid.cell_size();
  for (const Quad& q : quads) {
    double xlo = q.v[0].x, xhi = q.v[0].x, ylo = q.v[0].y, yhi = q.v[0].y;
    for (const Vec2& p : q.v) {
      xlo = std::min(xlo, p.x);
      xhi = std::max(xhi, p.x);
      ylo = std::min(ylo, p.y);
      yhi = std::max(yhi, p.y);
    }
    auto rx = axis_range(xlo, xhi, b.corner.x, b.side, n, kQuadTolerance);
    if (!rx) continue;
    auto ry = axis_range(ylo, yhi, b.corner.y, b.side, n, kQuadTolerance);
    if (!ry) continue;
    const bool degenerate = !(xhi > xlo) || !(yhi > ylo);
    if (degenerate || (rx->first == rx->last && ry->first == ry->last)) {
      for (std::size_t j = ry->first; j <= ry->last; ++j) {
        for (std::size_t i = rx->first; i <= rx->last; ++i) grid.set(i, j);
      }
      continue;
    }
    std::array<Vec2, 4> normals{};
    for (std::size_t k = 0; k < 4; ++k) normals[k] = edge_normal(q.v[k], q.v[(k + 1) % 4]);
    for (std::size_t j = ry->first; j <= ry->last; ++j) {
      for (std::size_t i = rx->first; i <= rx->last; ++i) {
        if (grid.get(i, j)) continue;
        const Square c = grid.cell_square(i, j);
        const Vec2 lo = c.corner;
        const Vec2 hi{c.corner.x + h, c.corner.y + h};
        bool separated = false;
        for (const Vec2& axis : normals) {
          if (axis.x == 0.0 && axis.y == 0.0) continue;
          if (projected_overlap(q, lo, hi, axis) <= kQuadTolerance * h) {
            separated = true;
            break;
          }
        }
        if (!separated) grid.set(i, j);
      }
    }
  }
}

BoxGrid rasterize(std::span<const Square> squares, const Square& bounds, int level) {
  BoxGrid g(bounds, level);
  rasterize_into(g, squares);
  return g;
}

BoxGrid rasterize(std::span<const Quad> quads, const Square& bounds, int level) {
  BoxGrid g(bounds, level);
  rasterize_into(g, quads);
  return g;
}

namespace {

template <typename Op>
BoxGrid combine(const BoxGrid& a, const BoxGrid& b, Op op) {
  if (!(a.bounds() == b.bounds())) {
    throw IncompatibleGridsError("grids cover different bounds");
  }
  const int level = std::min(a.level(), b.level());
  std::optional<BoxGrid> da;
  std::optional<BoxGrid> db;
  if (a.level() != level) da = a.downsample(level);
  if (b.level() != level) db = b.downsample(level);
  const BoxGrid& x = da ? *da : a;
  const BoxGrid& y = db ? *db : b;
  BoxGrid out(a.bounds(), level);
  const std::size_t n = out.cells_per_side();
  const auto rx = x.raw();
  const auto ry = y.raw();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = j * n + i;
      if (op(rx[k] != 0, ry[k] != 0)) out.set(i, j);
    }
  }
  return out;
}

}  // namespace

BoxGrid grid_intersection(const BoxGrid& a, const BoxGrid& b) {
  return combine(a, b, [](bool p, bool q) { return p && q; });
}

BoxGrid grid_union(const BoxGrid& a, const BoxGrid& b) {
  return combine(a, b, [](bool p, bool q) { return p || q; });
}

bool is_subset(const BoxGrid& sub, const BoxGrid& super) {
  if (!(sub.bounds() == super.bounds()) || sub.level() != super.level()) {
    throw IncompatibleGridsError("subset test needs identical bounds and level");
  }
  const auto a = sub.raw();
  const auto b = super.raw();
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] && !b[k]) return false;
  }
  return true;
}

bool quads_overlap(const Quad& a, const Quad& b) {
  auto separated_along = [&](Vec2 axis) {
    if (axis.x == 0.0 && axis.y == 0.0) return false;
    double alo = dot(a.v[0], axis), ahi = alo, blo = dot(b.v[0], axis), bhi = blo;
    for (std::size_t k = 1; k < 4; ++k) {
      const double pa = dot(a.v[k], axis);
      const double pb = dot(b.v[k], axis);
      alo = std::min(alo, pa);
      ahi = std::max(ahi, pa);
      blo = std::min(blo, pb);
      bhi = std::max(bhi, pb);
    }
    return ahi < blo || bhi < alo;
  };
  for (const Quad* q : {&a, &b}) {
    for (std::size_t k = 0; k < 4; ++k) {
      if (separated_along(edge_normal(q->v[k], q->v[(k + 1) % 4]))) return false;
    }
  }
  // Degenerate quads (points) have no edge normals; fall back to the axes.
  return !separated_along({1.0, 0.0}) && !separated_along({0.0, 1.0});
}

}  // namespace cdust
