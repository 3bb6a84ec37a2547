#pragma once

#include <cstddef>
#include <vector>

namespace nlos {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Vec2&) const = default;
};

// Endpoint-inclusive uniform axis.  Coordinates derive from the integer index
// so a (lo, hi, count) triple reproduces the same doubles everywhere.
struct Axis {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 1;

  double spacing() const {
    return count > 1 ? (hi - lo) / static_cast<double>(count - 1) : 0.0;
  }
  double coord(std::size_t i) const { return lo + static_cast<double>(i) * spacing(); }
  std::vector<double> coords() const;
  bool operator==(const Axis&) const = default;
};

// Row-major 2D grid; storage index = iy * x.count + ix.
struct Grid2D {
  Axis x, y;

  std::size_t size() const { return x.count * y.count; }
  std::size_t index(std::size_t ix, std::size_t iy) const { return iy * x.count + ix; }
  double cell_area() const { return x.spacing() * y.spacing(); }
  bool operator==(const Grid2D&) const = default;
};

// Throws std::invalid_argument on inverted bounds, zero counts, or
// non-positive spacing with count > 1.
Grid2D make_grid(double x_lo, double x_hi, std::size_t nx,
                 double y_lo, double y_hi, std::size_t ny);
Grid2D make_square_grid(double half_extent, std::size_t n);

// Profile axis continued outward at its own spacing until the next point
// would fall outside [-extent, extent].  coords[inner_offset + i] equals the
// inner axis coordinate exactly (same lo + j*spacing formula).
struct ExtendedAxis {
  std::vector<double> coords;
  std::size_t inner_offset = 0;
  std::size_t inner_count = 0;
};
ExtendedAxis extend_axis(const Axis& a, double extent);

}  // namespace nlos
