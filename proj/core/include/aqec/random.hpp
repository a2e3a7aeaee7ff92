#pragma once

#include <cstdint>
#include <random>

#include "aqec/types.hpp"

namespace aqec {

// Deterministic random stream. substream(i) derives an independent stream
// from (seed, i), so parallel or reordered Monte Carlo tasks reproduce the
// same draws for the same (master seed, task index).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  RandomStream substream(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform();

  // Standard normal via Box-Muller on the uniform stream, so the sequence is
  // identical across standard library implementations.
  double gaussian();

  // (g1 + i g2) / sqrt(2); unit variance as a complex Gaussian.
  Complex complex_gaussian();

  std::uint64_t next_u64();

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

// Haar-distributed unitary: QR of a complex Gaussian matrix with the R
// diagonal phases folded back into Q (plain QR alone is not Haar).
CMat haar_unitary(int dim, RandomStream& rng);

// Haar-random unit vector.
CVec random_pure_state(int dim, RandomStream& rng);

}  // namespace aqec
