#include "distributions.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"

namespace zic {

namespace {

constexpr std::int64_t kFactorialTableSize = 257;

const double* factorial_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(kFactorialTableSize);
    for (std::int64_t y = 0; y < kFactorialTableSize; ++y) {
      t[static_cast<std::size_t>(y)] = std::lgamma(static_cast<double>(y) + 1.0);
    }
    return t;
  }();
  return table.data();
}

inline void check_count(std::int64_t y) {
  if (y < 0) throw_error(ErrorCode::Domain, "count must be nonnegative");
}

inline void check_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw_error(ErrorCode::Domain,
                std::string(name) + " must be positive and finite");
  }
}

inline void check_probability(double pi) {
  if (!(pi >= 0.0 && pi < 1.0)) {
    throw_error(ErrorCode::Domain, "zero-inflation probability outside [0,1)");
  }
}

// log p and y*log(1-p) + (1/k) log p for p = 1/(1+k*lambda), all via log1p so
// small k keeps full precision.
inline double nb_count_terms(std::int64_t y, double lambda, double k) {
  const double kl = k * lambda;
  double log_p;
  if (kl < 1e-8) {
    // series for log(1+kl) when kl may underflow
    log_p = -kl * (1.0 - 0.5 * kl);
  } else {
    log_p = -std::log1p(kl);
  }
  double terms = log_p / k;
  if (y > 0) {
    terms += static_cast<double>(y) * (std::log(k) + std::log(lambda) + log_p);
  }
  return terms;
}

}  // namespace

double log_factorial(std::int64_t y) {
  check_count(y);
  if (y < kFactorialTableSize) {
    return factorial_table()[static_cast<std::size_t>(y)];
  }
  return std::lgamma(static_cast<double>(y) + 1.0);
}

double log_gamma_ratio(std::int64_t y, double a) {
  if (y == 0) return 0.0;
  if (a > 1e7 && y <= 1000000) {
    CompensatedSum s;
    for (std::int64_t j = 0; j < y; ++j) {
      s.add(std::log(a + static_cast<double>(j)));
    }
    return s.value();
  }
  const double ad = a;
  return std::lgamma(static_cast<double>(y) + ad) - std::lgamma(ad);
}

double log_pmf_poisson(std::int64_t y, double lambda) {
  check_count(y);
  check_positive(lambda, "lambda");
  return static_cast<double>(y) * std::log(lambda) - lambda - log_factorial(y);
}

double log_pmf_nb(std::int64_t y, double lambda, double k) {
  check_count(y);
  check_positive(lambda, "lambda");
  check_positive(k, "k");
  const double a = 1.0 / k;
  if (!std::isfinite(a)) return log_pmf_poisson(y, lambda);  // k below ~1e-308
  return log_gamma_ratio(y, a) - log_factorial(y) + nb_count_terms(y, lambda, k);
}

double log_pmf_zip(std::int64_t y, double lambda, double pi) {
  check_count(y);
  check_positive(lambda, "lambda");
  check_probability(pi);
  if (y == 0) {
    return log_sum_exp(std::log(pi), std::log1p(-pi) - lambda);
  }
  return std::log1p(-pi) + log_pmf_poisson(y, lambda);
}

double log_pmf_zinb(std::int64_t y, double lambda, double pi, double k) {
  check_count(y);
  check_positive(lambda, "lambda");
  check_probability(pi);
  check_positive(k, "k");
  if (y == 0) {
    return log_sum_exp(std::log(pi),
                       std::log1p(-pi) + nb_count_terms(0, lambda, k));
  }
  return std::log1p(-pi) + log_pmf_nb(y, lambda, k);
}

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::RankDeficient: return "rank_deficient";
    case ErrorCode::AllZeroResponse: return "all_zero_response";
    case ErrorCode::DatasetMismatch: return "dataset_mismatch";
    case ErrorCode::Generation: return "generation";
    case ErrorCode::Io: return "io";
    case ErrorCode::Internal: return "internal";
  }
  return "unknown";
}

}  // namespace zic
