#include "rng.hpp"

#include <cmath>
#include <limits>

#include "errors.hpp"

namespace zic {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline void check_finite_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw_error(ErrorCode::Domain,
                std::string(name) + " must be positive and finite");
  }
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::uint64_t x = seed;
  (void)splitmix64(x);
  x ^= 0x9E3779B97F4A7C15ULL * (stream_id + 0x632BE59BD9B4E019ULL);
  for (auto& s : state_) s = splitmix64(x);
  // SplitMix64 output cannot realistically be all-zero, but xoshiro requires
  // a nonzero state.
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double sample_normal(RngStream& rng) {
  // Polar Marsaglia; the second variate of each accepted pair is discarded so
  // each call consumes a self-contained block of the stream.
  for (;;) {
    const double u = 2.0 * rng.uniform() - 1.0;
    const double v = 2.0 * rng.uniform() - 1.0;
    const double s = u * u + v * v;
    if (s >= 1.0 || s == 0.0) continue;
    return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double sample_lognormal_standard(RngStream& rng) {
  return std::exp(sample_normal(rng));
}

int sample_bernoulli(RngStream& rng, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw_error(ErrorCode::Domain, "bernoulli probability outside [0,1]");
  }
  return rng.uniform() < p ? 1 : 0;
}

namespace {

std::int64_t poisson_knuth(RngStream& rng, double lambda) {
  const double limit = std::exp(-lambda);
  std::int64_t k = 0;
  double prod = rng.uniform();
  while (prod > limit) {
    ++k;
    prod *= rng.uniform();
  }
  return k;
}

// Hormann (1993) PTRS transformed rejection, valid for lambda >= 10.
std::int64_t poisson_ptrs(RngStream& rng, double lambda) {
  const double log_lambda = std::log(lambda);
  const double b = 0.931 + 2.53 * std::sqrt(lambda);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        kf * log_lambda - lambda - std::lgamma(kf + 1.0)) {
      return static_cast<std::int64_t>(kf);
    }
  }
}

}  // namespace

std::int64_t sample_poisson(RngStream& rng, double lambda) {
  check_finite_positive(lambda, "poisson lambda");
  if (lambda >= 9.0e18) {
    throw_error(ErrorCode::Domain, "poisson lambda too large for integer counts");
  }
  return lambda < 10.0 ? poisson_knuth(rng, lambda) : poisson_ptrs(rng, lambda);
}

double sample_gamma(RngStream& rng, double shape, double scale) {
  check_finite_positive(shape, "gamma shape");
  check_finite_positive(scale, "gamma scale");
  if (shape < 1.0) {
    // Boost: G(a) = G(a+1) * U^(1/a).
    const double u = rng.uniform();
    return sample_gamma(rng, shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = sample_normal(rng);
    const double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v * scale;
  }
}

std::int64_t sample_nb(RngStream& rng, double lambda, double k) {
  check_finite_positive(lambda, "nb lambda");
  check_finite_positive(k, "nb k");
  const double mixed = sample_gamma(rng, 1.0 / k, k * lambda);
  if (mixed == 0.0) return 0;  // gamma draw underflowed; Poisson(0) is 0
  if (!std::isfinite(mixed) || mixed >= 9.0e18) {
    throw_error(ErrorCode::Domain, "nb mixing draw too large for integer counts");
  }
  return sample_poisson(rng, mixed);
}

}  // namespace zic
