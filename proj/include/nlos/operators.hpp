#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "nlos/forward.hpp"
#include "nlos/scene.hpp"

namespace nlos {

// Linear part L of an affine measurement model.  Predictions are
//   opaque:      y(T) = b - L vec(T) + α ν
//   reflective:  y(T) =     L vec(T) + α ν
// Outputs are complex uniformly; intensity imaginary parts are zero.
// Operators are never materialized dense; apply/adjoint run matrix-free.
class LinearOp {
 public:
  virtual ~LinearOp() = default;

  virtual std::size_t input_size() const = 0;
  virtual std::size_t output_size() const = 0;

  virtual void apply(std::span<const double> t, std::span<cplx> out) const = 0;
  virtual void adjoint(std::span<const cplx> w, std::span<cplx> out) const = 0;

  // L applied to a complex image (linearity over re/im).
  void apply_cplx(std::span<const cplx> t, std::span<cplx> out) const;

  // column_norms[j] = ‖L e_j‖₂; generic fallback applies columns one by one,
  // concrete operators override with their separable closed forms.
  virtual std::vector<double> column_norms() const;

  virtual std::span<const cplx> offset() const = 0;  // b
  virtual bool has_ambient() const = 0;              // ν = 1 vs ν = 0
  virtual double mode_sign() const = 0;              // -1 opaque, +1 reflective

  // b + mode_sign * L t + α ν
  std::vector<cplx> predict(std::span<const double> t, double alpha) const;
};

// Intensity modality (Eq. 6 discretized): separable Gaussian convolution of
// the source with the extension folded into the offset.
class IntensityOperator final : public LinearOp {
 public:
  IntensityOperator(const Grid2D& obj, SourceMode mode, double extension_extent,
                    const SceneGeometry& geom, const Grid2D& wall_grid);

  std::size_t input_size() const override;
  std::size_t output_size() const override;
  void apply(std::span<const double> t, std::span<cplx> out) const override;
  void adjoint(std::span<const cplx> w, std::span<cplx> out) const override;
  std::vector<double> column_norms() const override;
  std::span<const cplx> offset() const override { return offset_; }
  bool has_ambient() const override { return true; }
  double mode_sign() const override;

  const Grid2D& object_grid() const { return obj_; }
  const Grid2D& wall_grid() const { return wall_; }

 private:
  Grid2D obj_, wall_;
  SourceMode mode_;
  double scale_;                  // (2πℓc²/λ²d²) Δ²
  std::vector<double> bx_, by_;   // envelope tables, object-major rows
  std::vector<double> bxt_;       // x-table transpose, wall-major rows
  std::vector<cplx> offset_;
};

// Coherence modality (Eq. 9 discretized): S·A-weighted nonuniform phase sums
// evaluated separably from per-axis tables.  Output is packed to the entries
// with ‖ρ‖ ≥ exclusion_radius.  Pass wall = nullptr for the unscattered
// propagation kernel (forward Γ_d).
class CoherenceOperator final : public LinearOp {
 public:
  CoherenceOperator(const Grid2D& obj, SourceMode mode, double extension_extent,
                    const SceneGeometry& geom, const WallScattering* wall,
                    Vec2 r, const Grid2D& rho_grid, double exclusion_radius);

  std::size_t input_size() const override;
  std::size_t output_size() const override;  // unmasked count
  void apply(std::span<const double> t, std::span<cplx> out) const override;
  void adjoint(std::span<const cplx> w, std::span<cplx> out) const override;
  std::vector<double> column_norms() const override;
  std::span<const cplx> offset() const override { return offset_; }
  bool has_ambient() const override { return false; }
  double mode_sign() const override;

  const Grid2D& object_grid() const { return obj_; }
  const Grid2D& rho_grid() const { return rho_; }
  Vec2 r() const { return r_; }
  std::span<const std::uint8_t> mask() const { return mask_; }

  // Full-grid variants (masked entries included) for the forward simulator.
  void apply_full(std::span<const double> t, std::span<cplx> out) const;
  std::span<const cplx> offset_full() const { return offset_full_; }
  std::vector<cplx> predict_full(std::span<const double> t) const;

 private:
  Grid2D obj_, rho_;
  SourceMode mode_;
  Vec2 r_;
  std::vector<std::uint8_t> mask_;
  std::vector<std::size_t> kept_;   // indices of unmasked entries
  std::vector<cplx> ex_, ey_;       // phase tables, object-major rows
  std::vector<double> bw_;          // B(r-r') over the object grid
  std::vector<cplx> prefac_;        // S(ρ) A(r,ρ) Δ² over the full ρ-grid
  std::vector<cplx> offset_full_;   // background term over the full ρ-grid
  std::vector<cplx> offset_;        // packed
};

// Spec-facing conveniences.
std::vector<double> intensity_apply(const IntensityOperator& op,
                                    std::span<const double> t, double alpha);
std::vector<cplx> coherence_apply(const CoherenceOperator& op, std::span<const double> t);
std::vector<cplx> operator_adjoint_apply(const LinearOp& op, std::span<const cplx> y);

}  // namespace nlos
