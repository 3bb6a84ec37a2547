#include "nlos/dct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nlos/simd/kernels.hpp"

namespace nlos {

namespace {

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("basis buffer size mismatch");
}

// Orthonormal DCT-II table: row k holds c_k cos(π(2i+1)k / 2n) over samples i.
std::vector<double> cos_table(std::size_t n) {
  std::vector<double> c(n * n);
  const double norm0 = std::sqrt(1.0 / static_cast<double>(n));
  const double norm = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const double ck = k == 0 ? norm0 : norm;
    for (std::size_t i = 0; i < n; ++i)
      c[k * n + i] = ck * std::cos(std::numbers::pi * (2.0 * i + 1.0) * k /
                                   (2.0 * static_cast<double>(n)));
  }
  return c;
}

}  // namespace

void IdentityBasis::synthesize(std::span<const double> coef, std::span<double> img) const {
  check_sizes(coef.size(), n_);
  check_sizes(img.size(), n_);
  std::copy(coef.begin(), coef.end(), img.begin());
}

void IdentityBasis::analyze(std::span<const double> img, std::span<double> coef) const {
  check_sizes(img.size(), n_);
  check_sizes(coef.size(), n_);
  std::copy(img.begin(), img.end(), coef.begin());
}

DctBasis::DctBasis(std::size_t nx, std::size_t ny) : nx_(nx), ny_(ny) {
  if (nx == 0 || ny == 0) throw std::invalid_argument("dct dimensions must be positive");
  cx_ = cos_table(nx);
  cy_ = cos_table(ny);
}

void DctBasis::synthesize(std::span<const double> coef, std::span<double> img) const {
  check_sizes(coef.size(), size());
  check_sizes(img.size(), size());
  const auto& k = simd::active_kernels();
  // tmp(y, kx) = Σ_ky cy[ky, y] coef(ky, kx); img(y, x) = Σ_kx tmp(y, kx) cx[kx, x]
  std::vector<double> tmp(size(), 0.0);
  for (std::size_t ky = 0; ky < ny_; ++ky)
    for (std::size_t y = 0; y < ny_; ++y)
      k.axpy(nx_, cy_[ky * ny_ + y], coef.data() + ky * nx_, tmp.data() + y * nx_);
  std::fill(img.begin(), img.end(), 0.0);
  for (std::size_t y = 0; y < ny_; ++y)
    for (std::size_t kx = 0; kx < nx_; ++kx)
      k.axpy(nx_, tmp[y * nx_ + kx], cx_.data() + kx * nx_, img.data() + y * nx_);
}

void DctBasis::analyze(std::span<const double> img, std::span<double> coef) const {
  check_sizes(img.size(), size());
  check_sizes(coef.size(), size());
  const auto& k = simd::active_kernels();
  // tmp(y, kx) = Σ_x img(y, x) cx[kx, x]; coef(ky, kx) = Σ_y cy[ky, y] tmp(y, kx)
  std::vector<double> tmp(size());
  for (std::size_t y = 0; y < ny_; ++y)
    for (std::size_t kx = 0; kx < nx_; ++kx)
      tmp[y * nx_ + kx] = k.dot(nx_, img.data() + y * nx_, cx_.data() + kx * nx_);
  std::fill(coef.begin(), coef.end(), 0.0);
  for (std::size_t ky = 0; ky < ny_; ++ky)
    for (std::size_t y = 0; y < ny_; ++y)
      k.axpy(nx_, cy_[ky * ny_ + y], tmp.data() + y * nx_, coef.data() + ky * nx_);
}

std::vector<double> dct_forward(const DctBasis& b, std::span<const double> img) {
  std::vector<double> coef(b.size());
  b.analyze(img, coef);
  return coef;
}

std::vector<double> dct_inverse(const DctBasis& b, std::span<const double> coef) {
  std::vector<double> img(b.size());
  b.synthesize(coef, img);
  return img;
}

std::shared_ptr<const Basis> make_basis(const std::string& name, const Grid2D& grid) {
  if (name == "dct") return std::make_shared<DctBasis>(grid.x.count, grid.y.count);
  if (name == "identity") return std::make_shared<IdentityBasis>(grid.size());
  throw std::invalid_argument("unknown basis: " + name);
}

}  // namespace nlos
