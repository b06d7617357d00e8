#pragma once

// Test-side oracles, deliberately independent of the library's numeric paths:
// long-double closed-form densities composed without the log-space identities
// the implementation uses, and a second finite-difference scheme with a
// different step policy.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

#include "dataset.hpp"
#include "rng.hpp"

namespace zic::test {

long double oracle_log_pmf_poisson(std::int64_t y, long double lambda);
long double oracle_log_pmf_nb(std::int64_t y, long double lambda, long double k);
long double oracle_log_pmf_zip(std::int64_t y, long double lambda, long double pi);
long double oracle_log_pmf_zinb(std::int64_t y, long double lambda,
                                long double pi, long double k);

using ScalarFn = std::function<double(const Eigen::VectorXd&)>;

/// Central differences with h_j = 1e-5 * max(1, |x_j|).
Eigen::VectorXd oracle_fd_gradient(const ScalarFn& fn, const Eigen::VectorXd& x);

/// Four-point second differences of fn itself (not of its gradient),
/// h_j = 1e-4 * max(1, |x_j|).
Eigen::MatrixXd oracle_fd_hessian(const ScalarFn& fn, const Eigen::VectorXd& x);

/// Small random instance: counts with a healthy share of zeros, designs
/// [1, binary, continuous] (and Z = [1, continuous] when with_zero_part).
Dataset random_dataset(RngStream& rng, int n, bool with_zero_part,
                       std::int64_t max_count = 50);

/// Random coefficients keeping |linear predictors| modest.
ParameterVector random_params(RngStream& rng, ModelKind kind, Eigen::Index p,
                              Eigen::Index q);

}  // namespace zic::test
