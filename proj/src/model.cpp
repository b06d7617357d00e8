#include "model.hpp"

#include <cassert>
#include <cmath>

#include "errors.hpp"
#include "numerics.hpp"

namespace zic {

Eigen::VectorXd linear_predictor(const Eigen::MatrixXd& m,
                                 const Eigen::VectorXd& coef) {
  if (m.cols() != coef.size()) {
    throw_error(ErrorCode::DimensionMismatch,
                "coefficient length does not match design width");
  }
  return m * coef;
}

double zero_probability(const Eigen::RowVectorXd& z_row,
                        const Eigen::VectorXd& alpha) {
  if (z_row.size() != alpha.size()) {
    throw_error(ErrorCode::DimensionMismatch,
                "zero-part coefficient length does not match row width");
  }
  return expit(z_row.dot(alpha.transpose()));
}

double connector_delta(const Eigen::RowVectorXd& x_row,
                       const Eigen::VectorXd& beta,
                       const Eigen::RowVectorXd& z_row,
                       const Eigen::VectorXd& alpha) {
  return x_row.dot(beta.transpose()) + softplus(z_row.dot(alpha.transpose()));
}

namespace {

struct RowMoments {
  double lambda;  // conditional mean of the count process
  double pi;      // structural-zero probability (0 for non-ZI kinds)
};

RowMoments row_moments(ModelKind kind, const ParameterVector& params,
                       const Eigen::RowVectorXd& x_row,
                       const Eigen::RowVectorXd& z_row) {
  const double xb = x_row.dot(params.beta.transpose());
  switch (kind) {
    case ModelKind::Poisson:
    case ModelKind::NegBin:
      return {std::exp(xb), 0.0};
    case ModelKind::Zip:
    case ModelKind::Zinb: {
      const double za = z_row.dot(params.alpha.transpose());
      return {std::exp(xb), expit(za)};
    }
    case ModelKind::Mzip:
    case ModelKind::Mzinb: {
      const double za = z_row.dot(params.alpha.transpose());
      return {std::exp(xb + softplus(za)), expit(za)};
    }
  }
  throw_error(ErrorCode::Internal, "unreachable model kind");
}

}  // namespace

double marginal_mean(ModelKind kind, const ParameterVector& params,
                     const Eigen::RowVectorXd& x_row,
                     const Eigen::RowVectorXd& z_row) {
  const double xb = x_row.dot(params.beta.transpose());
  if (is_marginal(kind)) {
    const double mu = std::exp(xb);
    // For the marginalized ZI kinds, mu must coincide with (1-pi)*lambda.
    assert(!has_zero_part(kind) || [&] {
      const auto m = row_moments(kind, params, x_row, z_row);
      return std::abs((1.0 - m.pi) * m.lambda - mu) <= 1e-12 * (1.0 + mu);
    }());
    return mu;
  }
  const double za = z_row.dot(params.alpha.transpose());
  // exp(x'beta)/(1+exp(z'alpha)) = (1-pi)*lambda, computed in log space.
  return std::exp(xb - softplus(za));
}

double model_variance(ModelKind kind, const ParameterVector& params,
                      const Eigen::RowVectorXd& x_row,
                      const Eigen::RowVectorXd& z_row) {
  const auto m = row_moments(kind, params, x_row, z_row);
  switch (kind) {
    case ModelKind::Poisson:
      return m.lambda;
    case ModelKind::NegBin:
      return m.lambda * (1.0 + params.k() * m.lambda);
    case ModelKind::Zip:
    case ModelKind::Mzip:
      return m.lambda * (1.0 - m.pi) * (1.0 + m.pi * m.lambda);
    case ModelKind::Zinb:
    case ModelKind::Mzinb:
      return m.lambda * (1.0 - m.pi) * (1.0 + m.lambda * (params.k() + m.pi));
  }
  throw_error(ErrorCode::Internal, "unreachable model kind");
}

}  // namespace zic
