#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "nlos/scene.hpp"

namespace nlos {

using cplx = std::complex<double>;

// Fresnel propagation prefactor A(r,ρ) = (2πℓc²/λ²d²) exp(i k r·ρ / d).
cplx propagation_prefactor(const SceneGeometry& geom, Vec2 r, Vec2 rho);

// Gaussian source envelope B(v) = exp(-ℓc²k²‖v‖²/(2d²)).
double coherence_envelope(const SceneGeometry& geom, Vec2 v);

// Wall attenuation S(ρ); ρ in meters, σ in (μm)⁻¹ (see WallScattering).
double scatter_attenuation(const WallScattering& wall, Vec2 rho);

// mask[i] = 1 where ‖ρ_i‖₂ ≥ exclusion_radius (entry usable downstream).
std::vector<std::uint8_t> exclusion_mask(const Grid2D& rho_grid, double exclusion_radius);

// One wall-plane coherence measurement: Γ over the ρ-grid at wall point r.
// Values are kept on the full grid; mask marks entries outside the exclusion
// disk.
struct CoherenceSample {
  Vec2 r;
  Grid2D rho_grid;
  double exclusion_radius = 0.0;
  std::vector<cplx> values;        // row-major over rho_grid
  std::vector<std::uint8_t> mask;  // 1 = kept
};

struct IntensityImage {
  Grid2D grid;
  std::vector<double> values;  // row-major
};

// Γ_d(r,ρ) = A(r,ρ) Σ_{r'} B(r-r') I(r') exp(-i k ρ·r' / d) Δ², summed over
// the profile grid plus its constant extension.
CoherenceSample propagate_coherence(const SourceField& src, const SceneGeometry& geom,
                                    Vec2 r, const Grid2D& rho_grid,
                                    double exclusion_radius);

// Γ_S(r,ρ) = S(ρ) Γ_d(r,ρ), in place.
void scatter_coherence(CoherenceSample& sample, const WallScattering& wall);

// I_S(r) = (2πℓc²/λ²d²) Σ_{r'} B(r-r') I(r') Δ² on the wall grid.
IntensityImage scattered_intensity(const SourceField& src, const SceneGeometry& geom,
                                   const Grid2D& wall_grid);

}  // namespace nlos
