#include "nlos/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nlos {

std::vector<double> Axis::coords() const {
  std::vector<double> c(count);
  for (std::size_t i = 0; i < count; ++i) c[i] = coord(i);
  return c;
}

namespace {

Axis make_axis(double lo, double hi, std::size_t n, const char* name) {
  if (n == 0) throw std::invalid_argument(std::string(name) + " axis count is zero");
  if (!(lo <= hi)) throw std::invalid_argument(std::string(name) + " axis bounds inverted");
  if (n > 1 && !(hi > lo))
    throw std::invalid_argument(std::string(name) + " axis spacing is not positive");
  return {lo, hi, n};
}

}  // namespace

Grid2D make_grid(double x_lo, double x_hi, std::size_t nx, double y_lo, double y_hi,
                 std::size_t ny) {
  return {make_axis(x_lo, x_hi, nx, "x"), make_axis(y_lo, y_hi, ny, "y")};
}

Grid2D make_square_grid(double half_extent, std::size_t n) {
  if (!(half_extent > 0)) throw std::invalid_argument("half extent must be positive");
  return make_grid(-half_extent, half_extent, n, -half_extent, half_extent, n);
}

ExtendedAxis extend_axis(const Axis& a, double extent) {
  ExtendedAxis out;
  const double dx = a.spacing();
  if (dx <= 0.0) {  // degenerate axis: no meaningful continuation
    out.coords = a.coords();
    out.inner_offset = 0;
    out.inner_count = a.count;
    return out;
  }
  auto fits = [&](long long j) {
    const double c = a.lo + static_cast<double>(j) * dx;
    return c >= -extent && c <= extent;
  };
  long long left = 0;
  while (fits(-(left + 1))) ++left;
  long long right = static_cast<long long>(a.count) - 1;
  while (fits(right + 1)) ++right;
  out.inner_offset = static_cast<std::size_t>(left);
  out.inner_count = a.count;
  out.coords.reserve(static_cast<std::size_t>(right + left + 1));
  for (long long j = -left; j <= right; ++j)
    out.coords.push_back(a.lo + static_cast<double>(j) * dx);
  return out;
}

}  // namespace nlos
