#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace nlos {

// Counter-based PRF (splitmix64 stream evaluated at an arbitrary counter):
// draw i of stream s never depends on other draws or streams, so adding a
// measurement cannot shift the noise of existing ones and parallel producers
// stay reproducible.
std::uint64_t counter_prf(std::uint64_t seed, std::uint64_t counter);

// Sub-seed scheme: every artifact (intensity image, coherence sample #i,
// sweep cell/trial) consumes its own stream derived from the master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

struct CounterRng {
  std::uint64_t seed = 0;

  double uniform(std::uint64_t counter) const;  // [0, 1)
  // standard normal via Box-Muller over counters (2i, 2i+1)
  double normal(std::uint64_t i) const;
};

// y[i] += σ n_i.  Throws std::invalid_argument for σ < 0.
void add_noise(std::vector<double>& y, double sigma, const CounterRng& rng);

// y[i] += (σ/√2)(n_{2i} + i n_{2i+1}): complex AWGN, per-component variance σ²/2.
void add_noise(std::vector<std::complex<double>>& y, double sigma, const CounterRng& rng);

}  // namespace nlos
