#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dataset.hpp"

namespace zic {

struct FitConfig {
  int max_iterations = 500;
  double gradient_tolerance = 1e-6;  // max-norm of the score
  double step_tolerance = 1e-10;     // relative step stall threshold
  int restart_attempts = 3;
};

/// Fit summary. Estimates, standard errors and z statistics are reported on
/// natural scales (alpha, beta, k); k's SE is the delta-method k*SE(log k).
struct FitResult {
  ModelKind kind = ModelKind::Poisson;
  ParameterVector estimates;
  std::vector<std::string> param_names;
  Eigen::VectorXd natural_estimates;
  Eigen::VectorXd std_errors;
  Eigen::VectorXd z_stats;
  std::vector<bool> significant_at_05;
  double loglik = 0.0;
  double minus2ll = 0.0;
  double aic = 0.0;
  bool converged = false;
  int iterations = 0;
  bool condition_warning = false;
  int n_free_params = 0;
  std::uint64_t dataset_fingerprint = 0;
};

/// Two-sided 5% normal critical value used for significance stars.
inline constexpr double kZCritical05 = 1.959964;

/// Starting point: count intercept log(mean(y)+0.01), zero intercept
/// logit(max(0.05, zero fraction)), slopes 0, log_k = log(0.5).
ParameterVector initialize(ModelKind kind, const Dataset& data);

FitResult fit(ModelKind kind, const Dataset& data, const FitConfig& config = {});

struct CompareRow {
  ModelKind kind;
  int n_params = 0;
  double minus2ll = 0.0;
  double aic = 0.0;
};

/// Ranks fits of the same dataset by ascending AIC; ties broken by fewer
/// parameters, then model-kind order.
std::vector<CompareRow> compare(const std::vector<FitResult>& results);

}  // namespace zic
