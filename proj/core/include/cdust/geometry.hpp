#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace cdust {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

double dot(Vec2 a, Vec2 b);
double norm(Vec2 a);
double distance(Vec2 a, Vec2 b);

/// Contraction ratio of the four-corner Cantor dust, strictly inside (0, 1/2).
class Alpha {
 public:
  /// Throws DomainError unless 0 < value < 1/2.
  explicit Alpha(double value);
  double value() const noexcept { return value_; }
  friend bool operator==(Alpha, Alpha) = default;

 private:
  double value_;
};

/// Corner quadrant chosen at one subdivision step. The enumerator order is
/// also the lexicographic order of addresses and matches the CAD letters
/// A, B, C, D.
enum class Quadrant : std::uint8_t { SW = 0, SE = 1, NW = 2, NE = 3 };

char quadrant_letter(Quadrant q);
Quadrant quadrant_from_letter(char c);  // throws FormatError

/// Closed axis-aligned square. A zero side denotes a single point.
struct Square {
  Vec2 corner;
  double side = 1.0;

  Vec2 center() const { return {corner.x + side / 2, corner.y + side / 2}; }
  bool contains(Vec2 p) const;
  friend bool operator==(const Square&, const Square&) = default;
};

/// Convex quadrilateral with counter-clockwise or clockwise vertex order;
/// the image of a Square under an isometry.
struct Quad {
  std::array<Vec2, 4> v;

  static Quad from_square(const Square& s);
};

/// Symbolic address of a generation-n square of C_alpha: a word over the four
/// quadrants, first letter = first subdivision.
class SquareAddress {
 public:
  SquareAddress(std::vector<Quadrant> word, Alpha alpha)
      : word_(std::move(word)), alpha_(alpha) {}

  /// Address number `index` among the 4^generation words in lexicographic
  /// order (base-4 digits, most significant first).
  static SquareAddress from_index(std::uint64_t index, std::size_t generation, Alpha alpha);

  std::size_t generation() const noexcept { return word_.size(); }
  const std::vector<Quadrant>& word() const noexcept { return word_; }
  Alpha alpha() const noexcept { return alpha_; }

  SquareAddress child(Quadrant q) const;

 private:
  std::vector<Quadrant> word_;
  Alpha alpha_;
};

/// Closed-form square of an address: corner_axis = sum_k b_k (a^(k-1) - a^k),
/// side = a^n. Recomputed from the word every time, in long double.
Square square_of_address(const SquareAddress& addr);

/// Square occupancy raster over a world square at resolution 2^level per axis.
///
/// Cell (i, j) covers [x0 + i h, x0 + (i+1) h) x [y0 + j h, y0 + (j+1) h) with
/// h = side / 2^level; the last column and the last row are closed on their
/// far edge. Row j = 0 is the bottom row.
class BoxGrid {
 public:
  static constexpr int kMaxLevel = 13;

  BoxGrid(Square bounds, int level);  // all cells empty

  const Square& bounds() const noexcept { return bounds_; }
  int level() const noexcept { return level_; }
  std::size_t cells_per_side() const noexcept { return n_; }
  double cell_size() const noexcept { return bounds_.side / static_cast<double>(n_); }

  bool get(std::size_t i, std::size_t j) const { return bits_[j * n_ + i] != 0; }
  void set(std::size_t i, std::size_t j, bool v = true) { bits_[j * n_ + i] = v ? 1 : 0; }

  std::size_t count() const;
  bool empty() const { return count() == 0; }

  /// Cell containing p under the half-open convention; nullopt outside bounds.
  std::optional<std::array<std::size_t, 2>> cell_of(Vec2 p) const;
  Vec2 cell_center(std::size_t i, std::size_t j) const;
  Square cell_square(std::size_t i, std::size_t j) const;

  /// OR-reduction onto a coarser level (target <= level()).
  BoxGrid downsample(int target_level) const;

  std::span<const std::uint8_t> raw() const noexcept { return bits_; }

  friend bool operator==(const BoxGrid&, const BoxGrid&) = default;

 private:
  Square bounds_;
  int level_;
  std::size_t n_;
  std::vector<std::uint8_t> bits_;
};

/// A cell is occupied iff its interior meets a square with positive area;
/// zero-side squares (points) occupy the cell that contains them.
BoxGrid rasterize(std::span<const Square> squares, const Square& bounds, int level);

/// Conservative raster of convex quads: a cell is occupied iff it overlaps a
/// quad with positive area (separating-axis test, tolerance 1e-9 cell sizes).
BoxGrid rasterize(std::span<const Quad> quads, const Square& bounds, int level);

/// Marks into an existing grid; used to build unions without reallocation.
void rasterize_into(BoxGrid& grid, std::span<const Square> squares);
void rasterize_into(BoxGrid& grid, std::span<const Quad> quads);

/// Cellwise AND. Grids must share bounds; the finer one is OR-downsampled to
/// the coarser level first. Throws IncompatibleGridsError otherwise.
BoxGrid grid_intersection(const BoxGrid& a, const BoxGrid& b);

/// Cellwise OR with the same compatibility rules.
BoxGrid grid_union(const BoxGrid& a, const BoxGrid& b);

/// True iff every occupied cell of `sub` is occupied in `super` (same bounds
/// and level required).
bool is_subset(const BoxGrid& sub, const BoxGrid& super);

/// Closed-set overlap of two convex quads (touching counts as overlap).
bool quads_overlap(const Quad& a, const Quad& b);

}  // namespace cdust
