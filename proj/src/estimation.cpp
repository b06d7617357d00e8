#include "estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "errors.hpp"
#include "likelihood.hpp"
#include "numerics.hpp"
#include "rng.hpp"

namespace zic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void check_full_rank(const Eigen::MatrixXd& m,
                     const std::vector<std::string>& names, const char* which) {
  if (m.cols() == 0) return;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(1e-10);
  const Eigen::Index rank = qr.rank();
  if (rank == m.cols()) return;
  const auto& perm = qr.colsPermutation().indices();
  std::ostringstream oss;
  oss << which << " design is rank deficient; dependent column(s):";
  for (Eigen::Index i = rank; i < m.cols(); ++i) {
    oss << ' ' << names[static_cast<std::size_t>(perm(i))];
  }
  throw_error(ErrorCode::RankDeficient, oss.str());
}

class NegLogLik {
 public:
  NegLogLik(ModelKind kind, const ParamLayout& layout, const Dataset& data)
      : kind_(kind), layout_(layout), data_(data) {}

  double value(const Eigen::VectorXd& theta) const {
    const double ll = loglik_packed(kind_, theta, layout_, data_);
    return std::isfinite(ll) ? -ll : kInf;
  }

  std::optional<Eigen::VectorXd> gradient(const Eigen::VectorXd& theta) const {
    auto g = loglik_gradient(kind_, theta, layout_, data_);
    if (g) *g = -*g;
    return g;
  }

 private:
  ModelKind kind_;
  ParamLayout layout_;
  const Dataset& data_;
};

struct OptimOutcome {
  Eigen::VectorXd x;
  double f = kInf;
  double gmax = kInf;
  int iterations = 0;
  bool converged = false;
  bool noise_limited = false;
};

// The FD gradient cannot resolve scores below a few ulps of |f| over the
// difference interval; below that floor further iterations only churn.
double gradient_noise_floor(double f) {
  return 2.0 * std::numeric_limits<double>::epsilon() * std::abs(f) / 2e-6;
}

OptimOutcome bfgs_minimize(const NegLogLik& obj, Eigen::VectorXd x,
                           const FitConfig& cfg) {
  const Eigen::Index dim = x.size();
  OptimOutcome out;
  out.x = x;

  double f = obj.value(x);
  if (!std::isfinite(f)) return out;
  auto g_opt = obj.gradient(x);
  if (!g_opt) {
    out.f = f;
    return out;
  }
  Eigen::VectorXd g = *g_opt;

  Eigen::MatrixXd binv = Eigen::MatrixXd::Identity(dim, dim);
  bool binv_is_identity = true;

  auto finalize = [&]() {
    out.x = x;
    out.f = f;
    out.gmax = g.cwiseAbs().maxCoeff();
    out.converged = out.gmax < cfg.gradient_tolerance;
  };

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    out.iterations = iter + 1;
    const double gmax = g.cwiseAbs().maxCoeff();
    if (gmax < cfg.gradient_tolerance) {
      finalize();
      return out;
    }
    if (gmax <= gradient_noise_floor(f)) {
      finalize();
      out.noise_limited = true;
      return out;
    }

    Eigen::VectorXd d = -(binv * g);
    double gd = g.dot(d);
    if (!(gd < 0.0)) {
      binv.setIdentity();
      binv_is_identity = true;
      d = -g;
      gd = g.dot(d);
    }

    double t = 1.0;
    double ft = kInf;
    bool accepted = false;
    while (t >= 1e-14) {
      ft = obj.value(x + t * d);
      if (std::isfinite(ft) && ft <= f + 1e-4 * t * gd) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (!binv_is_identity) {
        binv.setIdentity();
        binv_is_identity = true;
        continue;  // retry along steepest descent before declaring a stall
      }
      finalize();
      return out;
    }

    const Eigen::VectorXd s = t * d;
    const Eigen::VectorXd xn = x + s;
    auto gn = obj.gradient(xn);
    if (!gn) {
      x = xn;
      f = ft;
      finalize();
      return out;
    }

    const Eigen::VectorXd yv = *gn - g;
    const double sy = yv.dot(s);
    if (sy > 1e-10 * s.norm() * yv.norm()) {
      if (binv_is_identity) {
        binv *= sy / yv.squaredNorm();  // Nocedal-Wright initial scaling
        binv_is_identity = false;
      }
      const Eigen::VectorXd by = binv * yv;
      const double yby = yv.dot(by);
      binv += ((sy + yby) / (sy * sy)) * (s * s.transpose());
      binv -= (by * s.transpose() + s * by.transpose()) / sy;
    }

    const double step_rel = s.norm() / std::max(1.0, x.norm());
    x = xn;
    f = ft;
    g = *gn;
    if (step_rel < cfg.step_tolerance) break;
  }

  finalize();
  return out;
}

Eigen::Index find_intercept_column(const Eigen::MatrixXd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if ((m.col(j).array() == 1.0).all()) return j;
  }
  return -1;
}

void validate_config(const FitConfig& cfg) {
  if (cfg.max_iterations <= 0 || cfg.restart_attempts < 0 ||
      !(cfg.gradient_tolerance > 0.0) || !(cfg.step_tolerance > 0.0)) {
    throw_error(ErrorCode::InvalidArgument, "fit configuration fields must be positive");
  }
}

}  // namespace

ParameterVector initialize(ModelKind kind, const Dataset& data) {
  const auto& y = data.y();
  long double total = 0.0L;
  std::size_t zeros = 0;
  for (const auto yi : y) {
    total += static_cast<long double>(yi);
    if (yi == 0) ++zeros;
  }
  if (zeros == y.size()) {
    throw_error(ErrorCode::AllZeroResponse,
                "all responses are zero: count mean is undefined on the log scale");
  }
  const double mean = static_cast<double>(total / static_cast<long double>(y.size()));

  ParameterVector params;
  params.beta = Eigen::VectorXd::Zero(data.p());
  const Eigen::Index bx = find_intercept_column(data.x());
  if (bx >= 0) params.beta(bx) = std::log(mean + 0.01);

  if (has_zero_part(kind)) {
    params.alpha = Eigen::VectorXd::Zero(data.q());
    const Eigen::Index bz = find_intercept_column(data.z());
    if (bz >= 0) {
      const double prop = std::max(
          0.05, static_cast<double>(zeros) / static_cast<double>(y.size()));
      params.alpha(bz) = std::log(prop / (1.0 - prop));
    }
  } else {
    params.alpha = Eigen::VectorXd(0);
  }
  if (has_dispersion(kind)) params.log_k = std::log(0.5);
  return params;
}

FitResult fit(ModelKind kind, const Dataset& data, const FitConfig& config) {
  validate_config(config);
  const ParamLayout layout(kind, data);
  check_full_rank(data.x(), data.x_names(), "count-part");
  if (layout.q > 0) check_full_rank(data.z(), data.z_names(), "zero-part");

  const Eigen::VectorXd theta0 = initialize(kind, data).packed();
  const NegLogLik obj(kind, layout, data);

  OptimOutcome best;
  bool have_best = false;
  int iterations_total = 0;
  for (int attempt = 0; attempt <= config.restart_attempts; ++attempt) {
    Eigen::VectorXd start = theta0;
    if (attempt > 0) {
      RngStream jitter(0x7A1C0ULL, static_cast<std::uint64_t>(attempt));
      start = have_best && std::isfinite(best.f) ? best.x : theta0;
      for (Eigen::Index j = 0; j < start.size(); ++j) {
        start(j) += 0.1 * attempt * (1.0 + std::abs(start(j))) * sample_normal(jitter);
      }
      if (!std::isfinite(obj.value(start))) start = theta0;
    }
    OptimOutcome res = bfgs_minimize(obj, start, config);
    iterations_total += res.iterations;
    if (!have_best || res.f < best.f ||
        (res.f == best.f && res.converged && !best.converged)) {
      best = res;
      have_best = true;
    }
    if (best.converged || res.noise_limited) break;
  }
  if (!std::isfinite(best.f)) {
    throw_error(ErrorCode::Internal,
                "log-likelihood is not finite at any visited point");
  }

  const Eigen::Index dim = layout.size();
  FitResult result;
  result.kind = kind;
  result.param_names = parameter_names(kind, data);
  result.estimates = ParameterVector::unpack(best.x, layout);
  result.loglik = -best.f;
  result.minus2ll = -2.0 * result.loglik;
  result.aic = result.minus2ll + 2.0 * static_cast<double>(dim);
  result.converged = best.converged;
  result.iterations = iterations_total;
  result.n_free_params = static_cast<int>(dim);
  result.dataset_fingerprint = data.fingerprint();

  // Observed information: SEs from the inverse of -H at the optimum, falling
  // back to a pseudo-inverse (flagged) when -H is not positive definite.
  Eigen::VectorXd se = Eigen::VectorXd::Constant(dim, kNan);
  bool warn = false;
  const auto hess = loglik_hessian(kind, best.x, layout, data);
  if (hess) {
    const Eigen::MatrixXd info = -*hess;
    Eigen::LLT<Eigen::MatrixXd> llt(info);
    bool solved = false;
    if (llt.info() == Eigen::Success) {
      const Eigen::MatrixXd cov =
          llt.solve(Eigen::MatrixXd::Identity(dim, dim));
      if ((cov.diagonal().array() > 0.0).all()) {
        se = cov.diagonal().cwiseSqrt();
        solved = true;
      }
    }
    if (!solved) {
      warn = true;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(info);
      const Eigen::VectorXd ev = es.eigenvalues();
      const double cutoff = 1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff());
      Eigen::VectorXd inv_ev = Eigen::VectorXd::Zero(dim);
      for (Eigen::Index i = 0; i < dim; ++i) {
        if (ev(i) > cutoff) inv_ev(i) = 1.0 / ev(i);
      }
      const Eigen::MatrixXd cov =
          es.eigenvectors() * inv_ev.asDiagonal() * es.eigenvectors().transpose();
      se = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    }
  } else {
    warn = true;
  }
  result.condition_warning = warn;

  // Natural-scale reporting: k = exp(log_k) with delta-method SE.
  Eigen::VectorXd natural = best.x;
  if (layout.has_k) {
    const double k_hat = std::exp(best.x(dim - 1));
    natural(dim - 1) = k_hat;
    se(dim - 1) *= k_hat;
  }
  result.natural_estimates = natural;
  result.std_errors = se;
  result.z_stats = natural.array() / se.array();
  result.significant_at_05.resize(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) {
    result.significant_at_05[static_cast<std::size_t>(i)] =
        std::isfinite(result.z_stats(i)) &&
        std::abs(result.z_stats(i)) > kZCritical05;
  }
  return result;
}

std::vector<CompareRow> compare(const std::vector<FitResult>& results) {
  if (results.size() < 2) {
    throw_error(ErrorCode::InvalidArgument,
                "model comparison needs at least two fits");
  }
  for (const auto& r : results) {
    if (r.dataset_fingerprint != results.front().dataset_fingerprint) {
      throw_error(ErrorCode::DatasetMismatch,
                  "fits being compared come from different datasets");
    }
  }
  std::vector<CompareRow> rows;
  rows.reserve(results.size());
  for (const auto& r : results) {
    rows.push_back({r.kind, r.n_free_params, r.minus2ll, r.aic});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const CompareRow& a, const CompareRow& b) {
                     if (a.aic != b.aic) return a.aic < b.aic;
                     if (a.n_params != b.n_params) return a.n_params < b.n_params;
                     return static_cast<int>(a.kind) < static_cast<int>(b.kind);
                   });
  return rows;
}

}  // namespace zic
