#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dataset.hpp"
#include "estimation.hpp"

namespace zic {

/// Incidence density ratio for one count-part covariate. Marginal kinds get a
/// single exp(beta_j) with a Wald CI; latent-class ZIP/ZINB get one point IDR
/// per evaluation profile (no CI), keyed by the profile's zero-part linear
/// predictor.
struct IdrReport {
  std::string covariate;
  ModelKind kind = ModelKind::Poisson;
  bool constant = false;
  double idr = 0.0;                                  // set when constant
  std::optional<std::pair<double, double>> ci_95;    // set when constant
  std::vector<std::pair<double, double>> profiles;   // (zero linpred, idr)
};

/// profiles defaults to the fitted dataset's observed covariate rows.
IdrReport idr(const FitResult& fit, const Dataset& data,
              Eigen::Index covariate_index);

/// Marginal mean prediction for new covariate rows under the fitted model.
Eigen::VectorXd predict_marginal_mean(const FitResult& fit,
                                      const Eigen::MatrixXd& x_new,
                                      const Eigen::MatrixXd& z_new);

}  // namespace zic
