#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "estimation.hpp"
#include "rng.hpp"

namespace zic {

/// Monte Carlo study description: which marginalized model generates the
/// data, its true parameters, the covariate recipe sizes, and which models
/// are fit to every replicate.
struct SimulationDesign {
  ModelKind generator = ModelKind::Mzip;  // MZIP or MZINB
  Eigen::VectorXd true_alpha;
  Eigen::VectorXd true_beta;
  std::optional<double> true_k;           // required iff generator is MZINB
  std::vector<int> sample_sizes;
  int replicates = 1;
  std::uint64_t seed = 0;
  std::vector<ModelKind> fit_kinds;
  FitConfig fit_config;
  int threads = 1;
};

/// One (fit kind, sample size, parameter) cell of the study summary.
/// Parameters absent from the generating model (e.g. k when the generator is
/// MZIP) have no truth; their bias/relative bias/MSE are NaN.
struct SummaryCell {
  ModelKind fit_kind = ModelKind::Poisson;
  int sample_size = 0;
  std::string parameter;
  double true_value = 0.0;  // NaN when the parameter has no truth
  double mean_estimate = 0.0;
  double mean_model_se = 0.0;
  double empirical_se = 0.0;  // sample SD across converged replicates
  double bias = 0.0;
  double relative_bias = 0.0;
  double mse = 0.0;  // bias^2 + population variance of estimates
  int replicates_converged = 0;
  int replicates_failed = 0;
};

struct SummaryTable {
  ModelKind generator = ModelKind::Mzip;
  std::optional<double> true_k;
  std::uint64_t seed = 0;
  int replicates = 0;
  std::vector<SummaryCell> cells;
};

/// x1 ~ Bernoulli(0.5), x2 ~ standard lognormal; design X = Z = [1, x1, x2].
std::pair<Eigen::VectorXd, Eigen::VectorXd> generate_covariates(RngStream& rng,
                                                                int n);

/// Draws counts from the marginalized model: pi = expit(z'alpha),
/// lambda = (1+e^{z'alpha}) e^{x'beta}; structural zero with probability pi,
/// otherwise Poisson(lambda) (MZIP) or gamma-Poisson NB(lambda, k) (MZINB).
std::vector<std::int64_t> generate_response(RngStream& rng, ModelKind generator,
                                            const ParameterVector& params,
                                            const Eigen::MatrixXd& x,
                                            const Eigen::MatrixXd& z);

/// Runs the full study. Each replicate draws from its own RngStream keyed by
/// replicate index, so results are bit-identical for any worker thread count.
SummaryTable run_study(const SimulationDesign& design);

/// Names in pack order for the sim designs: alpha0.., beta0.., k.
std::vector<std::string> design_parameter_names(ModelKind fit_kind,
                                                Eigen::Index q, Eigen::Index p);

}  // namespace zic
