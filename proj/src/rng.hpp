#pragma once

#include <cstdint>

namespace zic {

/// Reproducible random stream: identical (seed, stream_id) pairs replay the
/// same sequence, distinct stream_ids give statistically independent streams.
///
/// The generator is xoshiro256++ with its 256-bit state expanded from
/// (seed, stream_id) by SplitMix64. Both algorithms are pinned here so that
/// simulation results are stable across platforms and releases.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

 private:
  std::uint64_t state_[4];
  std::uint64_t seed_;
  std::uint64_t stream_id_;
};

// Samplers. All draw a pinned number/order of variates from the stream for a
// given outcome, which is part of the reproducibility contract.

/// Standard normal via Marsaglia's polar method (no state carried over).
double sample_normal(RngStream& rng);

/// exp(N(0,1)).
double sample_lognormal_standard(RngStream& rng);

int sample_bernoulli(RngStream& rng, double p);

/// Poisson draw; Knuth's product method below lambda = 10, Hormann's PTRS
/// transformed rejection above it (exact for lambda up to ~1e17).
std::int64_t sample_poisson(RngStream& rng, double lambda);

/// Gamma(shape, scale) via Marsaglia-Tsang, with the U^(1/shape) boost for
/// shape < 1.
double sample_gamma(RngStream& rng, double shape, double scale);

/// Negative binomial with mean lambda and Var = lambda(1 + k*lambda),
/// drawn as the gamma-Poisson mixture: lam* ~ Gamma(1/k, k*lambda),
/// y ~ Poisson(lam*).
std::int64_t sample_nb(RngStream& rng, double lambda, double k);

}  // namespace zic
