#include "cdust/cantor.hpp"

#include <cmath>
#include <string>

#include "cdust/errors.hpp"

namespace cdust {

SquareAddress CantorApproximant::address(std::uint64_t index) const {
  return SquareAddress::from_index(index, depth_, alpha_);
}

std::vector<SquareAddress> CantorApproximant::addresses() const {
  std::vector<SquareAddress> out;
  out.reserve(size());
  for (std::uint64_t i = 0; i < size(); ++i) out.push_back(address(i));
  return out;
}

std::vector<Square> CantorApproximant::squares() const {
  std::vector<Square> out;
  out.reserve(size());
  for (std::uint64_t i = 0; i < size(); ++i) out.push_back(square_of_address(address(i)));
  return out;
}

CantorApproximant generate_cantor(Alpha alpha, std::size_t depth, std::uint64_t budget) {
  if (depth > 31 || (std::uint64_t{1} << (2 * depth)) > budget) {
    throw ResourceError("4^" + std::to_string(depth) + " addresses exceed the budget of " +
                        std::to_string(budget));
  }
  return CantorApproximant(alpha, depth);
}

double cantor_dimension(Alpha alpha) { return -std::log(4.0) / std::log(alpha.value()); }

Alpha alpha_for_dimension(double d) {
  if (!(d > 0.0 && d < 2.0)) {
    throw DomainError("dimension must satisfy 0 < d < 2, got " + std::to_string(d));
  }
  return Alpha(std::pow(4.0, -1.0 / d));
}

namespace {

std::vector<Quad> place_with_offset(const CantorApproximant& c, double diameter, const Isometry& iso,
                                    double offset) {
  if (!(diameter > 0.0)) throw DomainError("diameter must be positive");
  const double scale = diameter / std::sqrt(2.0);
  std::vector<Quad> out;
  out.reserve(c.size());
  for (std::uint64_t i = 0; i < c.size(); ++i) {
    const Square s = square_of_address(c.address(i));
    const Square scaled{{scale * s.corner.x - offset, scale * s.corner.y - offset}, scale * s.side};
    out.push_back(iso.apply(scaled));
  }
  return out;
}

}  // namespace

std::vector<Quad> scale_and_place(const CantorApproximant& c, double diameter, const Isometry& iso) {
  return place_with_offset(c, diameter, iso, 0.0);
}

std::vector<Quad> place_centered(const CantorApproximant& c, double diameter, const Isometry& iso) {
  return place_with_offset(c, diameter, iso, diameter / std::sqrt(2.0) / 2.0);
}

std::size_t depth_for_resolution(Alpha alpha, double diameter, double cell, std::uint64_t budget) {
  const double side = diameter / std::sqrt(2.0);
  std::size_t depth = 0;
  while (side * std::pow(alpha.value(), static_cast<double>(depth)) > cell) {
    if (depth >= 31 || (std::uint64_t{1} << (2 * (depth + 1))) > budget) break;
    ++depth;
  }
  return depth;
}

}  // namespace cdust
