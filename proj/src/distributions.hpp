#pragma once

#include <cstdint>

namespace zic {

/// log(y!) via log-gamma, table-backed for y <= 256.
double log_factorial(std::int64_t y);

/// log Gamma(y + a) - log Gamma(a), evaluated as sum_{j<y} log(a+j) when a is
/// large so the ratio stays accurate as the dispersion parameter k = 1/a
/// approaches zero.
double log_gamma_ratio(std::int64_t y, double a);

double log_pmf_poisson(std::int64_t y, double lambda);

/// Negative binomial with mean lambda and overdispersion k (gamma shape 1/k):
/// p = 1/(1 + k*lambda), mass Gamma(y+1/k)/(Gamma(1/k) y!) (1-p)^y p^(1/k).
double log_pmf_nb(std::int64_t y, double lambda, double k);

/// Zero-inflated Poisson: zero mass pi + (1-pi) e^{-lambda}, combined in log
/// space so large lambda cannot underflow the mixture.
double log_pmf_zip(std::int64_t y, double lambda, double pi);

/// Zero-inflated negative binomial: zero mass pi + (1-pi) p^(1/k).
double log_pmf_zinb(std::int64_t y, double lambda, double pi, double k);

}  // namespace zic
