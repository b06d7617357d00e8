#pragma once

#include <Eigen/Dense>
#include <optional>

#include "dataset.hpp"

namespace zic {

/// Total log-likelihood with optional per-observation contributions. A
/// non-finite total marks an invalid parameter point; the optimizer treats it
/// as a rejection.
struct LogLikValue {
  double total = 0.0;
  std::optional<Eigen::VectorXd> per_obs;
};

LogLikValue loglik(ModelKind kind, const ParameterVector& params,
                   const Dataset& data, bool with_per_obs = false);

/// Packed-parameter entry point used by the finite-difference machinery.
double loglik_packed(ModelKind kind, const Eigen::VectorXd& packed,
                     const ParamLayout& layout, const Dataset& data);

/// Central finite-difference gradient with per-coordinate step
/// h_j = max(1e-6, 1e-7 |theta_j|). Returns nullopt if any probe point
/// evaluates non-finite.
std::optional<Eigen::VectorXd> loglik_gradient(ModelKind kind,
                                               const Eigen::VectorXd& packed,
                                               const ParamLayout& layout,
                                               const Dataset& data);

/// Finite-difference Hessian: central differences of the central gradients,
/// symmetrized as (H + H')/2.
std::optional<Eigen::MatrixXd> loglik_hessian(ModelKind kind,
                                              const Eigen::VectorXd& packed,
                                              const ParamLayout& layout,
                                              const Dataset& data);

}  // namespace zic
