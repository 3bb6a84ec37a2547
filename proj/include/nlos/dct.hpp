#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nlos/grid.hpp"

namespace nlos {

// Sparsifying basis Ψ: x are coefficients, t = Ψx the image.
class Basis {
 public:
  virtual ~Basis() = default;
  virtual std::size_t size() const = 0;
  virtual void synthesize(std::span<const double> coef, std::span<double> img) const = 0;
  virtual void analyze(std::span<const double> img, std::span<double> coef) const = 0;
};

class IdentityBasis final : public Basis {
 public:
  explicit IdentityBasis(std::size_t n) : n_(n) {}
  std::size_t size() const override { return n_; }
  void synthesize(std::span<const double> coef, std::span<double> img) const override;
  void analyze(std::span<const double> img, std::span<double> coef) const override;

 private:
  std::size_t n_;
};

// Orthonormal separable 2D DCT-II over an ny × nx image (row-major).
// Coefficient (ky, kx) lives at index ky*nx + kx.
class DctBasis final : public Basis {
 public:
  DctBasis(std::size_t nx, std::size_t ny);
  std::size_t size() const override { return nx_ * ny_; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  void synthesize(std::span<const double> coef, std::span<double> img) const override;
  void analyze(std::span<const double> img, std::span<double> coef) const override;

 private:
  std::size_t nx_, ny_;
  std::vector<double> cx_, cy_;  // row k holds cos table over samples
};

// Ψᵀ t: image to DCT coefficients (sizes must match; std::invalid_argument).
std::vector<double> dct_forward(const DctBasis& b, std::span<const double> img);
// Ψ x: coefficients to image.
std::vector<double> dct_inverse(const DctBasis& b, std::span<const double> coef);

std::shared_ptr<const Basis> make_basis(const std::string& name, const Grid2D& grid);

}  // namespace nlos
