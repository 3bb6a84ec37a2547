#pragma once

#include <cstddef>
#include <vector>

#include "nlos/grid.hpp"

namespace nlos {

struct SceneGeometry {
  double wavelength = 525e-6;     // λ [m]
  double distance = 6.0;          // propagation distance d [m]
  double coherence_width = 2.5e-6;  // ℓc [m]

  double wavenumber() const;  // k = 2π/λ
};

// Gaussian wall-scatter attenuation S(ρ) = (σx σy)² exp(-σx²ρx²/2 - σy²ρy²/2)
// with σ in inverse micrometers and ρ expressed in micrometers, i.e. σ = 1/w
// for an attenuation width of w μm.
struct WallScattering {
  double sigma_x = 1.0;
  double sigma_y = 1.0 / 6.0;
};

enum class SourceMode { opaque, reflective };

// Opacity/reflectivity samples T over the object-plane grid (1 on the object).
struct OpacityProfile {
  Grid2D grid;
  std::vector<double> values;  // row-major
};

// Object-plane radiance model: the profile embedded in a constant extension
// out to ±extension_extent (opaque walls pass 1-T and extend with ones;
// reflective scenes emit T and extend with zeros).
struct SourceField {
  OpacityProfile profile;
  double extension_extent = 0.0;  // ≤ grid bounds disables the extension
  SourceMode mode = SourceMode::opaque;
};

double source_background(SourceMode mode);  // extension value: 1 or 0

// Binary star rasterized by point-in-polygon tests at pixel centers.
// Requires 0 < inner ≤ outer ≤ grid half-extent and points ≥ 2.
OpacityProfile make_star_profile(const Grid2D& grid, Vec2 center, std::size_t points,
                                 double outer_radius, double inner_radius);

// Source intensity sampled at the query grid (nearest profile sample inside
// the profile box, the constant background inside ±extension_extent,
// std::out_of_range beyond).
std::vector<double> object_plane_intensity(const SourceField& src, const Grid2D& query);

}  // namespace nlos
