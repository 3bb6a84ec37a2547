#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <stdexcept>

#include "doctest.h"
#include "nlos/scene.hpp"

using namespace nlos;

TEST_CASE("star raster covers a plausible area fraction and is centered") {
  const Grid2D g = make_square_grid(2.0, 101);
  const OpacityProfile p = make_star_profile(g, {0, 0}, 5, 1.5, 0.6);
  double frac = 0.0;
  for (double v : p.values) frac += v;
  frac /= static_cast<double>(p.values.size());
  // 5-point star with these radii fills roughly 10-25% of the 4x4 window
  CHECK(frac > 0.05);
  CHECK(frac < 0.4);
  // center pixel inside, far corner outside
  CHECK(p.values[g.index(50, 50)] == 1.0);
  CHECK(p.values[g.index(0, 0)] == 0.0);
  // the top tip points up: pixel just below +1.5 on the y axis is filled
  CHECK(p.values[g.index(50, 85)] == 1.0);
}

TEST_CASE("star raster is symmetric under x mirroring for odd grids") {
  const Grid2D g = make_square_grid(2.0, 41);
  const OpacityProfile p = make_star_profile(g, {0, 0}, 5, 1.5, 0.6);
  for (std::size_t iy = 0; iy < 41; ++iy)
    for (std::size_t ix = 0; ix < 41; ++ix)
      CHECK(p.values[g.index(ix, iy)] == p.values[g.index(40 - ix, iy)]);
}

TEST_CASE("degenerate star with inner == outer is a regular polygon disk") {
  const Grid2D g = make_square_grid(2.0, 61);
  const OpacityProfile p = make_star_profile(g, {0, 0}, 6, 1.0, 1.0);
  double frac = 0.0;
  for (double v : p.values) frac += v;
  frac /= static_cast<double>(p.values.size());
  // regular 12-gon of radius 1 has area ~3 = 18.75% of the 16 m² window
  CHECK(frac == doctest::Approx(3.0 / 16.0).epsilon(0.15));
}

TEST_CASE("star construction rejects bad parameters") {
  const Grid2D g = make_square_grid(2.0, 11);
  CHECK_THROWS_AS(make_star_profile(g, {0, 0}, 1, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(make_star_profile(g, {0, 0}, 5, 0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_star_profile(g, {0, 0}, 5, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_star_profile(g, {0, 0}, 5, 2.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_star_profile(g, {1.5, 0}, 5, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("fully opaque object blocks everything in opaque mode") {
  const Grid2D g = make_square_grid(1.0, 5);
  SourceField src{{g, std::vector<double>(g.size(), 1.0)}, 0.0, SourceMode::opaque};
  const auto v = object_plane_intensity(src, g);
  for (double x : v) CHECK(x == 0.0);
}

TEST_CASE("absent object passes the full backlight including the extension") {
  const Grid2D g = make_square_grid(1.0, 5);
  SourceField src{{g, std::vector<double>(g.size(), 0.0)}, 3.0, SourceMode::opaque};
  const Grid2D q = make_square_grid(3.0, 7);  // spans profile + extension
  const auto v = object_plane_intensity(src, q);
  for (double x : v) CHECK(x == 1.0);
}

TEST_CASE("reflective extension emits nothing") {
  const Grid2D g = make_square_grid(1.0, 5);
  SourceField src{{g, std::vector<double>(g.size(), 0.7)}, 5.0, SourceMode::reflective};
  const Grid2D q = make_grid(2.0, 4.0, 5, 2.0, 4.0, 5);  // extension only
  for (double x : object_plane_intensity(src, q)) CHECK(x == 0.0);
}

TEST_CASE("opaque and reflective intensities are complementary on the grid") {
  const Grid2D g = make_square_grid(2.0, 21);
  const OpacityProfile p = make_star_profile(g, {0, 0}, 5, 1.5, 0.6);
  SourceField op{p, 0.0, SourceMode::opaque};
  SourceField re{p, 0.0, SourceMode::reflective};
  const auto a = object_plane_intensity(op, g);
  const auto b = object_plane_intensity(re, g);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] + b[i] == doctest::Approx(1.0));
}

TEST_CASE("queries beyond the extension throw") {
  const Grid2D g = make_square_grid(1.0, 5);
  SourceField src{{g, std::vector<double>(g.size(), 0.0)}, 2.0, SourceMode::opaque};
  const Grid2D q = make_grid(2.5, 3.0, 2, 0.0, 0.0, 1);
  CHECK_THROWS_AS(object_plane_intensity(src, q), std::out_of_range);
}

TEST_CASE("queries snap to the nearest profile sample") {
  const Grid2D g = make_grid(0, 1, 2, 0, 1, 2);  // 2x2, spacing 1
  OpacityProfile p{g, {0.0, 1.0, 0.25, 0.75}};
  SourceField src{p, 0.0, SourceMode::reflective};
  const Grid2D q = make_grid(0.1, 0.9, 2, 0.1, 0.9, 2);  // off-lattice points
  const auto v = object_plane_intensity(src, q);
  CHECK(v[0] == 0.0);
  CHECK(v[1] == 1.0);
  CHECK(v[2] == 0.25);
  CHECK(v[3] == 0.75);
}
