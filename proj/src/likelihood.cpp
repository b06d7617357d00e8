#include "likelihood.hpp"

#include <cmath>
#include <limits>

#include "distributions.hpp"
#include "errors.hpp"
#include "numerics.hpp"

namespace zic {

namespace {

// Unvalidated log masses for the hot path. lambda = 0 or inf produce -inf /
// NaN, which the caller surfaces as an invalid point rather than an error.
inline double poisson_mass(std::int64_t y, double lambda) {
  if (y == 0) return -lambda;
  return static_cast<double>(y) * std::log(lambda) - lambda - log_factorial(y);
}

inline double nb_log_p0(double lambda, double k) {
  const double kl = k * lambda;
  const double log_p = kl < 1e-8 ? -kl * (1.0 - 0.5 * kl) : -std::log1p(kl);
  return log_p / k;
}

inline double nb_mass(std::int64_t y, double lambda, double k) {
  if (y == 0) return nb_log_p0(lambda, k);
  const double kl = k * lambda;
  const double log_p = kl < 1e-8 ? -kl * (1.0 - 0.5 * kl) : -std::log1p(kl);
  return log_gamma_ratio(y, 1.0 / k) - log_factorial(y) +
         static_cast<double>(y) * (std::log(k) + std::log(lambda) + log_p) +
         log_p / k;
}

struct KindPlan {
  bool zero_part;
  bool marginal;   // lambda = exp(x'beta + softplus(z'alpha))
  bool dispersed;  // negative binomial count component
};

KindPlan plan_for(ModelKind kind) {
  switch (kind) {
    case ModelKind::Poisson: return {false, false, false};
    case ModelKind::NegBin: return {false, false, true};
    case ModelKind::Zip: return {true, false, false};
    case ModelKind::Zinb: return {true, false, true};
    case ModelKind::Mzip: return {true, true, false};
    case ModelKind::Mzinb: return {true, true, true};
  }
  throw_error(ErrorCode::Internal, "unreachable model kind");
}

}  // namespace

LogLikValue loglik(ModelKind kind, const ParameterVector& params,
                   const Dataset& data, bool with_per_obs) {
  const KindPlan plan = plan_for(kind);
  if (params.beta.size() != data.p()) {
    throw_error(ErrorCode::DimensionMismatch,
                "beta length does not match count design");
  }
  if (plan.zero_part && params.alpha.size() != data.q()) {
    throw_error(ErrorCode::DimensionMismatch,
                "alpha length does not match zero design");
  }
  if (plan.dispersed && !params.log_k) {
    throw_error(ErrorCode::InvalidArgument, "model requires log_k");
  }

  // k can underflow to zero for very negative log_k; the Poisson limit is the
  // mathematically correct continuation there.
  double k = 0.0;
  bool use_nb = plan.dispersed;
  if (plan.dispersed) {
    k = std::exp(*params.log_k);
    if (k == 0.0) use_nb = false;
  }

  const Eigen::VectorXd xb = data.x() * params.beta;
  Eigen::VectorXd eta;
  if (plan.zero_part) eta = data.z() * params.alpha;

  const auto n = data.n();
  Eigen::VectorXd per_obs;
  if (with_per_obs) per_obs.resize(n);

  const auto& y = data.y();
  CompensatedSum sum;
  bool finite = true;

  auto record = [&](Eigen::Index i, double value) {
    if (!std::isfinite(value)) finite = false;
    sum.add(value);
    if (with_per_obs) per_obs(i) = value;
  };

  auto lambda_at = [&](Eigen::Index i) {
    return plan.marginal ? std::exp(xb(i) + softplus(eta(i))) : std::exp(xb(i));
  };

  if (!plan.zero_part) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double lam = std::exp(xb(i));
      const auto yi = y[static_cast<std::size_t>(i)];
      record(i, use_nb ? nb_mass(yi, lam, k) : poisson_mass(yi, lam));
    }
  } else {
    // Mixture written in terms of log pi and log(1-pi) via softplus so the
    // zero-part logit can run to +/-700 without overflow.
    for (Eigen::Index i : data.zero_rows()) {
      const double lam = lambda_at(i);
      const double log_pi = -softplus(-eta(i));
      const double log_1m_pi = -softplus(eta(i));
      const double count_zero = use_nb ? nb_log_p0(lam, k) : -lam;
      record(i, log_sum_exp(log_pi, log_1m_pi + count_zero));
    }
    for (Eigen::Index i : data.positive_rows()) {
      const double lam = lambda_at(i);
      const double log_1m_pi = -softplus(eta(i));
      const auto yi = y[static_cast<std::size_t>(i)];
      const double mass = use_nb ? nb_mass(yi, lam, k) : poisson_mass(yi, lam);
      record(i, log_1m_pi + mass);
    }
  }

  LogLikValue out;
  out.total = finite ? sum.value() : std::numeric_limits<double>::quiet_NaN();
  if (with_per_obs) out.per_obs = std::move(per_obs);
  return out;
}

double loglik_packed(ModelKind kind, const Eigen::VectorXd& packed,
                     const ParamLayout& layout, const Dataset& data) {
  return loglik(kind, ParameterVector::unpack(packed, layout), data).total;
}

namespace {

inline double gradient_step(double theta) {
  return std::max(1e-6, 1e-7 * std::abs(theta));
}

inline double hessian_step(double theta) {
  return std::max(3e-4, 1e-4 * std::abs(theta));
}

}  // namespace

std::optional<Eigen::VectorXd> loglik_gradient(ModelKind kind,
                                               const Eigen::VectorXd& packed,
                                               const ParamLayout& layout,
                                               const Dataset& data) {
  const auto dim = packed.size();
  Eigen::VectorXd grad(dim);
  Eigen::VectorXd probe = packed;
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double h = gradient_step(packed(j));
    probe(j) = packed(j) + h;
    const double up = loglik_packed(kind, probe, layout, data);
    probe(j) = packed(j) - h;
    const double down = loglik_packed(kind, probe, layout, data);
    probe(j) = packed(j);
    if (!std::isfinite(up) || !std::isfinite(down)) return std::nullopt;
    grad(j) = (up - down) / (2.0 * h);
  }
  return grad;
}

std::optional<Eigen::MatrixXd> loglik_hessian(ModelKind kind,
                                              const Eigen::VectorXd& packed,
                                              const ParamLayout& layout,
                                              const Dataset& data) {
  const auto dim = packed.size();
  Eigen::MatrixXd hess(dim, dim);
  Eigen::VectorXd probe = packed;
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double h = hessian_step(packed(j));
    probe(j) = packed(j) + h;
    const auto up = loglik_gradient(kind, probe, layout, data);
    probe(j) = packed(j) - h;
    const auto down = loglik_gradient(kind, probe, layout, data);
    probe(j) = packed(j);
    if (!up || !down) return std::nullopt;
    hess.col(j) = (*up - *down) / (2.0 * h);
  }
  return Eigen::MatrixXd(0.5 * (hess + hess.transpose()));
}

}  // namespace zic
