#include "nlos/forward.hpp"

#include <cmath>
#include <numbers>

namespace nlos {

namespace {

// 2πℓc²/λ²d²
double base_prefactor(const SceneGeometry& g) {
  return 2.0 * std::numbers::pi * g.coherence_width * g.coherence_width /
         (g.wavelength * g.wavelength * g.distance * g.distance);
}

// Object-plane samples over the extended domain (profile + constant background).
struct ExtendedSource {
  ExtendedAxis x, y;
  std::vector<double> intensity;  // row-major over (y, x)

  ExtendedSource(const SourceField& src) {
    x = extend_axis(src.profile.grid.x, src.extension_extent);
    y = extend_axis(src.profile.grid.y, src.extension_extent);
    const double bg = source_background(src.mode);
    const Grid2D& pg = src.profile.grid;
    intensity.assign(x.coords.size() * y.coords.size(), bg);
    for (std::size_t iy = 0; iy < pg.y.count; ++iy)
      for (std::size_t ix = 0; ix < pg.x.count; ++ix) {
        const double t = src.profile.values[pg.index(ix, iy)];
        intensity[(iy + y.inner_offset) * x.coords.size() + ix + x.inner_offset] =
            src.mode == SourceMode::opaque ? 1.0 - t : t;
      }
  }
};

}  // namespace

cplx propagation_prefactor(const SceneGeometry& geom, Vec2 r, Vec2 rho) {
  const double phase = geom.wavenumber() * (r.x * rho.x + r.y * rho.y) / geom.distance;
  return std::polar(base_prefactor(geom), phase);
}

double coherence_envelope(const SceneGeometry& geom, Vec2 v) {
  const double lk_over_d = geom.coherence_width * geom.wavenumber() / geom.distance;
  return std::exp(-0.5 * lk_over_d * lk_over_d * (v.x * v.x + v.y * v.y));
}

double scatter_attenuation(const WallScattering& wall, Vec2 rho) {
  const double rx = rho.x * 1e6, ry = rho.y * 1e6;  // σ is in (μm)⁻¹
  const double sx2 = wall.sigma_x * wall.sigma_x, sy2 = wall.sigma_y * wall.sigma_y;
  return sx2 * sy2 * std::exp(-0.5 * (sx2 * rx * rx + sy2 * ry * ry));
}

std::vector<std::uint8_t> exclusion_mask(const Grid2D& rho_grid, double exclusion_radius) {
  std::vector<std::uint8_t> mask(rho_grid.size());
  for (std::size_t iy = 0; iy < rho_grid.y.count; ++iy)
    for (std::size_t ix = 0; ix < rho_grid.x.count; ++ix) {
      const double rx = rho_grid.x.coord(ix), ry = rho_grid.y.coord(iy);
      mask[rho_grid.index(ix, iy)] =
          std::sqrt(rx * rx + ry * ry) >= exclusion_radius ? 1 : 0;
    }
  return mask;
}

CoherenceSample propagate_coherence(const SourceField& src, const SceneGeometry& geom,
                                    Vec2 r, const Grid2D& rho_grid,
                                    double exclusion_radius) {
  const ExtendedSource es(src);
  const double k = geom.wavenumber(), d = geom.distance;
  const double area = src.profile.grid.cell_area();
  const std::size_t enx = es.x.coords.size(), eny = es.y.coords.size();

  CoherenceSample s{r, rho_grid, exclusion_radius, {},
                    exclusion_mask(rho_grid, exclusion_radius)};
  s.values.resize(rho_grid.size());
  for (std::size_t iry = 0; iry < rho_grid.y.count; ++iry)
    for (std::size_t irx = 0; irx < rho_grid.x.count; ++irx) {
      const Vec2 rho{rho_grid.x.coord(irx), rho_grid.y.coord(iry)};
      cplx acc = 0.0;
      for (std::size_t iy = 0; iy < eny; ++iy) {
        const double yq = es.y.coords[iy];
        for (std::size_t ix = 0; ix < enx; ++ix) {
          const double xq = es.x.coords[ix];
          const double w =
              coherence_envelope(geom, {r.x - xq, r.y - yq}) * es.intensity[iy * enx + ix];
          if (w == 0.0) continue;
          acc += w * std::polar(1.0, -k * (rho.x * xq + rho.y * yq) / d);
        }
      }
      s.values[rho_grid.index(irx, iry)] =
          propagation_prefactor(geom, r, rho) * acc * area;
    }
  return s;
}

void scatter_coherence(CoherenceSample& sample, const WallScattering& wall) {
  for (std::size_t iy = 0; iy < sample.rho_grid.y.count; ++iy)
    for (std::size_t ix = 0; ix < sample.rho_grid.x.count; ++ix) {
      const Vec2 rho{sample.rho_grid.x.coord(ix), sample.rho_grid.y.coord(iy)};
      sample.values[sample.rho_grid.index(ix, iy)] *= scatter_attenuation(wall, rho);
    }
}

IntensityImage scattered_intensity(const SourceField& src, const SceneGeometry& geom,
                                   const Grid2D& wall_grid) {
  const ExtendedSource es(src);
  const double c0 = base_prefactor(geom);
  const double area = src.profile.grid.cell_area();
  const std::size_t enx = es.x.coords.size(), eny = es.y.coords.size();

  IntensityImage img{wall_grid, std::vector<double>(wall_grid.size())};
  for (std::size_t iwy = 0; iwy < wall_grid.y.count; ++iwy)
    for (std::size_t iwx = 0; iwx < wall_grid.x.count; ++iwx) {
      const Vec2 r{wall_grid.x.coord(iwx), wall_grid.y.coord(iwy)};
      double acc = 0.0;
      for (std::size_t iy = 0; iy < eny; ++iy)
        for (std::size_t ix = 0; ix < enx; ++ix)
          acc += coherence_envelope(geom, {r.x - es.x.coords[ix], r.y - es.y.coords[iy]}) *
                 es.intensity[iy * enx + ix];
      img.values[wall_grid.index(iwx, iwy)] = c0 * acc * area;
    }
  return img;
}

}  // namespace nlos
