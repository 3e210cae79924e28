#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cdust/geometry.hpp"
#include "cdust/isometry.hpp"

namespace cdust {

/// Largest number of generation-n addresses generate_cantor accepts by default.
inline constexpr std::uint64_t kDefaultAddressBudget = std::uint64_t{1} << 24;

/// Depth-n approximant A_n of the four-corner Cantor dust C_alpha: the 4^n
/// generation-n squares, addressed in lexicographic order. Addresses are
/// produced on demand from their index.
class CantorApproximant {
 public:
  CantorApproximant(Alpha alpha, std::size_t depth) : alpha_(alpha), depth_(depth) {}

  Alpha alpha() const noexcept { return alpha_; }
  std::size_t depth() const noexcept { return depth_; }
  std::uint64_t size() const noexcept { return std::uint64_t{1} << (2 * depth_); }

  SquareAddress address(std::uint64_t index) const;
  std::vector<SquareAddress> addresses() const;
  std::vector<Square> squares() const;

 private:
  Alpha alpha_;
  std::size_t depth_;
};

/// Throws ResourceError when 4^depth exceeds `budget`.
CantorApproximant generate_cantor(Alpha alpha, std::size_t depth,
                                  std::uint64_t budget = kDefaultAddressBudget);

/// Similarity dimension -log 4 / log alpha of C_alpha, in (0, 2).
double cantor_dimension(Alpha alpha);

/// Inverse of cantor_dimension: alpha = 4^(-1/d). Throws DomainError unless
/// 0 < d < 2.
Alpha alpha_for_dimension(double d);

/// Scales the approximant about the origin so the diagonal of its bounding
/// square equals `diameter`, then applies `iso`.
std::vector<Quad> scale_and_place(const CantorApproximant& c, double diameter, const Isometry& iso);

/// Like scale_and_place, but the scaled copy is first centred on the origin,
/// so iso.z is the centre of the placed copy.
std::vector<Quad> place_centered(const CantorApproximant& c, double diameter, const Isometry& iso);

/// Depth at which generation squares of a copy with the given diameter fall
/// below `cell` (one cell of the working raster), capped by the budget.
std::size_t depth_for_resolution(Alpha alpha, double diameter, double cell,
                                 std::uint64_t budget = kDefaultAddressBudget);

}  // namespace cdust
