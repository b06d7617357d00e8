#pragma once

#include <Eigen/Dense>

#include "dataset.hpp"

namespace zic {

/// Rowwise inner products M * coef.
Eigen::VectorXd linear_predictor(const Eigen::MatrixXd& m,
                                 const Eigen::VectorXd& coef);

/// expit(z'alpha), overflow-safe.
double zero_probability(const Eigen::RowVectorXd& z_row,
                        const Eigen::VectorXd& alpha);

/// Conditional-mean predictor delta = x'beta + log(1 + exp(z'alpha)) that
/// makes the marginal mean of a zero-inflated model log-linear in x'beta.
double connector_delta(const Eigen::RowVectorXd& x_row,
                       const Eigen::VectorXd& beta,
                       const Eigen::RowVectorXd& z_row,
                       const Eigen::VectorXd& alpha);

/// Population mean E(Y) for one covariate row: exp(x'beta) for the marginal
/// kinds, exp(x'beta)/(1+exp(z'alpha)) for the latent-class ZIP/ZINB.
double marginal_mean(ModelKind kind, const ParameterVector& params,
                     const Eigen::RowVectorXd& x_row,
                     const Eigen::RowVectorXd& z_row);

/// Var(Y) for one covariate row under the model's own lambda and pi.
double model_variance(ModelKind kind, const ParameterVector& params,
                      const Eigen::RowVectorXd& x_row,
                      const Eigen::RowVectorXd& z_row);

}  // namespace zic
