#pragma once

#include <span>
#include <vector>

#include "nlos/admm.hpp"

namespace nlos {

// n(j) = ‖L e_j‖₂ per object pixel: the operator's pixel-domain sensitivity
// (zero entries span its null space).
std::vector<double> null_map_image(const LinearOp& op);

// ñ(j) = ‖L Ψ e_j‖₂ per basis coefficient.
std::vector<double> null_map_basis(const LinearOp& op, const Basis& basis, int threads = 1);

// Elementwise max; sizes must match.
std::vector<double> combine_maps(std::span<const double> a, std::span<const double> b);

// Eq-15 redundancy weights for term i: w_i(j) = 1 iff
//   1/σ_i ≥ (κ/(N-1)) Σ_{k≠i} ‖Φ_k Φ_i* e_j‖₂ / σ_k   (ties include).
// N < 2 yields all ones and sets *trivial.
std::vector<double> sample_weights(const std::vector<MeasurementTerm>& terms,
                                   std::size_t i, double kappa, int threads = 1,
                                   bool* trivial = nullptr);

// Mean squared error of raw (unclamped) values.
double mse(std::span<const double> a, std::span<const double> b);

// Clamp to [0,1] for display.
std::vector<double> clamp_unit(std::span<const double> v);

// Mean of map values whose DCT index (kx, ky) falls in the given octave band;
// octave 0 is the top band max(kx,ky) ∈ [K/2, K), each next band halves.
double octave_mean(std::span<const double> map, std::size_t nx, std::size_t ny,
                   int octave_from_top);
// Fraction of Σv² carried by indices with max(kx,ky) above the half band.
double highband_energy_fraction(std::span<const double> coef, std::size_t nx,
                                std::size_t ny);

}  // namespace nlos
