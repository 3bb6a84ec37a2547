#include "nlos/scene.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nlos {

double SceneGeometry::wavenumber() const { return 2.0 * std::numbers::pi / wavelength; }

double source_background(SourceMode mode) {
  return mode == SourceMode::opaque ? 1.0 : 0.0;
}

namespace {

// Crossing-number point-in-polygon test (PNPOLY).
bool point_in_polygon(double px, double py, const std::vector<double>& vx,
                      const std::vector<double>& vy) {
  bool inside = false;
  const std::size_t n = vx.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if ((vy[i] > py) != (vy[j] > py) &&
        px < (vx[j] - vx[i]) * (py - vy[i]) / (vy[j] - vy[i]) + vx[i])
      inside = !inside;
  }
  return inside;
}

}  // namespace

OpacityProfile make_star_profile(const Grid2D& grid, Vec2 center, std::size_t points,
                                 double outer_radius, double inner_radius) {
  if (points < 2) throw std::invalid_argument("star needs at least 2 points");
  if (!(inner_radius > 0) || !(inner_radius <= outer_radius))
    throw std::invalid_argument("star radii must satisfy 0 < inner <= outer");
  if (center.x - outer_radius < grid.x.lo || center.x + outer_radius > grid.x.hi ||
      center.y - outer_radius < grid.y.lo || center.y + outer_radius > grid.y.hi)
    throw std::invalid_argument("star does not fit inside the grid");

  const std::size_t nv = 2 * points;
  std::vector<double> vx(nv), vy(nv);
  for (std::size_t j = 0; j < nv; ++j) {
    const double rad = (j % 2 == 0) ? outer_radius : inner_radius;
    const double th =
        std::numbers::pi / 2 + std::numbers::pi * static_cast<double>(j) / points;
    vx[j] = center.x + rad * std::cos(th);
    vy[j] = center.y + rad * std::sin(th);
  }

  OpacityProfile p{grid, std::vector<double>(grid.size(), 0.0)};
  for (std::size_t iy = 0; iy < grid.y.count; ++iy)
    for (std::size_t ix = 0; ix < grid.x.count; ++ix)
      if (point_in_polygon(grid.x.coord(ix), grid.y.coord(iy), vx, vy))
        p.values[grid.index(ix, iy)] = 1.0;
  return p;
}

namespace {

// Nearest sample index when q lies within half a cell of the axis, else -1.
long long nearest_inside(const Axis& a, double q) {
  const double dx = a.spacing();
  if (a.count == 1) return q == a.lo ? 0 : -1;
  if (q < a.lo - 0.5 * dx || q > a.hi + 0.5 * dx) return -1;
  long long i = std::llround((q - a.lo) / dx);
  if (i < 0) i = 0;
  if (i >= static_cast<long long>(a.count)) i = static_cast<long long>(a.count) - 1;
  return i;
}

}  // namespace

std::vector<double> object_plane_intensity(const SourceField& src, const Grid2D& query) {
  const double bg = source_background(src.mode);
  const Grid2D& pg = src.profile.grid;
  std::vector<double> out(query.size());
  for (std::size_t iy = 0; iy < query.y.count; ++iy) {
    const double qy = query.y.coord(iy);
    const long long py = nearest_inside(pg.y, qy);
    for (std::size_t ix = 0; ix < query.x.count; ++ix) {
      const double qx = query.x.coord(ix);
      const long long px = nearest_inside(pg.x, qx);
      double v;
      if (px >= 0 && py >= 0) {
        const double t = src.profile.values[pg.index(static_cast<std::size_t>(px),
                                                     static_cast<std::size_t>(py))];
        v = src.mode == SourceMode::opaque ? 1.0 - t : t;
      } else if (std::abs(qx) <= src.extension_extent &&
                 std::abs(qy) <= src.extension_extent) {
        v = bg;
      } else {
        throw std::out_of_range("query point outside profile and extension");
      }
      out[query.index(ix, iy)] = v;
    }
  }
  return out;
}

}  // namespace nlos
