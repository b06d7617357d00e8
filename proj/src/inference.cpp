#include "inference.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "model.hpp"
#include "numerics.hpp"

namespace zic {

IdrReport idr(const FitResult& fit, const Dataset& data,
              Eigen::Index covariate_index) {
  if (covariate_index < 0 || covariate_index >= data.p()) {
    throw_error(ErrorCode::InvalidArgument, "covariate index outside count design");
  }
  const std::string& label = data.x_names()[static_cast<std::size_t>(covariate_index)];
  const bool looks_like_intercept =
      (data.x().col(covariate_index).array() == 1.0).all();
  if (looks_like_intercept) {
    throw_error(ErrorCode::InvalidArgument,
                "IDR is undefined for the intercept column '" + label + "'");
  }

  IdrReport report;
  report.covariate = label;
  report.kind = fit.kind;

  const double beta_j = fit.estimates.beta(covariate_index);
  if (is_marginal(fit.kind)) {
    // Count-part coefficients act on the population mean directly.
    report.constant = true;
    report.idr = std::exp(beta_j);
    const Eigen::Index se_index =
        fit.estimates.alpha.size() + covariate_index;
    const double se = fit.std_errors(se_index);
    report.ci_95 = {std::exp(beta_j - kZCritical05 * se),
                    std::exp(beta_j + kZCritical05 * se)};
    return report;
  }

  // Latent-class ZIP/ZINB: exp(beta_j) (1+e^s)/(1+e^{s+alpha_j}) where s is
  // the zero-part linear predictor at the profile. alpha_j = 0 when the
  // covariate does not appear in the zero part.
  double alpha_j = 0.0;
  const auto& znames = data.z_names();
  const auto zpos = std::find(znames.begin(), znames.end(), label);
  if (zpos != znames.end()) {
    alpha_j = fit.estimates.alpha(
        static_cast<Eigen::Index>(zpos - znames.begin()));
  }
  report.constant = false;
  const Eigen::VectorXd eta = data.z() * fit.estimates.alpha;
  report.profiles.reserve(static_cast<std::size_t>(data.n()));
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const double s = eta(i);
    const double ratio = std::exp(beta_j + softplus(s) - softplus(s + alpha_j));
    report.profiles.emplace_back(s, ratio);
  }
  return report;
}

Eigen::VectorXd predict_marginal_mean(const FitResult& fit,
                                      const Eigen::MatrixXd& x_new,
                                      const Eigen::MatrixXd& z_new) {
  if (x_new.cols() != fit.estimates.beta.size()) {
    throw_error(ErrorCode::DimensionMismatch,
                "prediction rows do not match the fitted count design");
  }
  const bool zero_part = has_zero_part(fit.kind);
  if (zero_part && (z_new.cols() != fit.estimates.alpha.size() ||
                    z_new.rows() != x_new.rows())) {
    throw_error(ErrorCode::DimensionMismatch,
                "prediction rows do not match the fitted zero design");
  }
  Eigen::VectorXd out(x_new.rows());
  const Eigen::RowVectorXd empty_z(0);
  for (Eigen::Index i = 0; i < x_new.rows(); ++i) {
    out(i) = marginal_mean(fit.kind, fit.estimates, x_new.row(i),
                           zero_part ? Eigen::RowVectorXd(z_new.row(i)) : empty_z);
  }
  return out;
}

}  // namespace zic
