#include "nlos/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlos/parallel.hpp"
#include "nlos/simd/kernels.hpp"

namespace nlos {

std::vector<double> null_map_image(const LinearOp& op) { return op.column_norms(); }

std::vector<double> null_map_basis(const LinearOp& op, const Basis& basis, int threads) {
  if (basis.size() != op.input_size())
    throw std::invalid_argument("basis/operator size mismatch");
  const std::size_t n = basis.size();
  std::vector<double> map(n);
  parallel_for(n, threads, [&](std::size_t j) {
    const auto& k = simd::active_kernels();
    std::vector<double> e(n, 0.0), img(n);
    e[j] = 1.0;
    basis.synthesize(e, img);
    std::vector<cplx> out(op.output_size());
    op.apply(img, out);
    map[j] = std::sqrt(k.wnrm2sq(out.size(), nullptr, out.data()));
  });
  return map;
}

std::vector<double> combine_maps(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("map size mismatch");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], b[i]);
  return out;
}

std::vector<double> sample_weights(const std::vector<MeasurementTerm>& terms,
                                   std::size_t i, double kappa, int threads,
                                   bool* trivial) {
  if (i >= terms.size()) throw std::invalid_argument("term index out of range");
  const std::size_t m = terms[i].op->output_size();
  if (trivial) *trivial = false;
  if (terms.size() < 2) {
    if (trivial) *trivial = true;
    return std::vector<double>(m, 1.0);
  }
  const double lhs = 1.0 / terms[i].noise_sigma;  // σ = 0 keeps everything
  const double scale = kappa / static_cast<double>(terms.size() - 1);
  std::vector<double> w(m);
  parallel_for(m, threads, [&](std::size_t j) {
    const auto& k = simd::active_kernels();
    std::vector<cplx> e(m, cplx(0.0));
    e[j] = 1.0;
    std::vector<cplx> col(terms[i].op->input_size());
    terms[i].op->adjoint(e, col);
    double rhs = 0.0;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      if (t == i) continue;
      std::vector<cplx> out(terms[t].op->output_size());
      terms[t].op->apply_cplx(col, out);
      rhs += std::sqrt(k.wnrm2sq(out.size(), nullptr, out.data())) /
             terms[t].noise_sigma;
    }
    w[j] = lhs >= scale * rhs ? 1.0 : 0.0;
  });
  return w;
}

double mse(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("mse size mismatch");
  if (a.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s / static_cast<double>(a.size());
}

std::vector<double> clamp_unit(std::span<const double> v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::clamp(v[i], 0.0, 1.0);
  return out;
}

double octave_mean(std::span<const double> map, std::size_t nx, std::size_t ny,
                   int octave_from_top) {
  if (map.size() != nx * ny) throw std::invalid_argument("map size mismatch");
  const std::size_t kmax = std::max(nx, ny);
  std::size_t hi = kmax >> octave_from_top;
  const std::size_t lo = hi / 2;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t ky = 0; ky < ny; ++ky)
    for (std::size_t kx = 0; kx < nx; ++kx) {
      const std::size_t b = std::max(kx, ky);
      if (b >= lo && b < hi) {
        sum += map[ky * nx + kx];
        ++count;
      }
    }
  return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

double highband_energy_fraction(std::span<const double> coef, std::size_t nx,
                                std::size_t ny) {
  if (coef.size() != nx * ny) throw std::invalid_argument("coef size mismatch");
  const std::size_t half = std::max(nx, ny) / 2;
  double total = 0.0, high = 0.0;
  for (std::size_t ky = 0; ky < ny; ++ky)
    for (std::size_t kx = 0; kx < nx; ++kx) {
      const double v2 = coef[ky * nx + kx] * coef[ky * nx + kx];
      total += v2;
      if (std::max(kx, ky) >= half) high += v2;
    }
  return total > 0.0 ? high / total : 0.0;
}

}  // namespace nlos
