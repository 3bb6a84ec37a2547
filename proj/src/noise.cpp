#include "nlos/noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nlos {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

}  // namespace

std::uint64_t counter_prf(std::uint64_t seed, std::uint64_t counter) {
  return mix64(mix64(seed + kGolden) + (counter + 1) * kGolden);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return counter_prf(master, stream);
}

double CounterRng::uniform(std::uint64_t counter) const {
  return static_cast<double>(counter_prf(seed, counter) >> 11) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t i) const {
  // 1 - u ∈ (0, 1] keeps the log finite
  const double u1 = uniform(2 * i);
  const double u2 = uniform(2 * i + 1);
  const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

void add_noise(std::vector<double>& y, double sigma, const CounterRng& rng) {
  if (sigma < 0) throw std::invalid_argument("noise sigma must be non-negative");
  if (sigma == 0) return;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += sigma * rng.normal(i);
}

void add_noise(std::vector<std::complex<double>>& y, double sigma, const CounterRng& rng) {
  if (sigma < 0) throw std::invalid_argument("noise sigma must be non-negative");
  if (sigma == 0) return;
  const double s = sigma / std::sqrt(2.0);
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] += std::complex<double>(s * rng.normal(2 * i), s * rng.normal(2 * i + 1));
}

}  // namespace nlos
