#pragma once

#include <cstddef>
#include <optional>

namespace cdust::detail {

struct AxisRange {
  std::size_t first;
  std::size_t last;  // inclusive
};

/// Cells of an n-cell axis starting at `origin` with total length `side`
/// whose extent overlaps [lo, hi] by more than `tol` cell units. A degenerate
/// interval occupies the cell containing it (half-open, last cell closed).
std::optional<AxisRange> axis_range(double lo, double hi, double origin, double side, std::size_t n,
                                    double tol);

}  // namespace cdust::detail
