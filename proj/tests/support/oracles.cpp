#include "oracles.hpp"

#include <cmath>

namespace zic::test {

long double oracle_log_pmf_poisson(std::int64_t y, long double lambda) {
  return static_cast<long double>(y) * std::log(lambda) - lambda -
         std::lgamma(static_cast<long double>(y) + 1.0L);
}

long double oracle_log_pmf_nb(std::int64_t y, long double lambda, long double k) {
  const long double a = 1.0L / k;
  const long double p = 1.0L / (1.0L + k * lambda);
  return std::lgamma(static_cast<long double>(y) + a) - std::lgamma(a) -
         std::lgamma(static_cast<long double>(y) + 1.0L) +
         static_cast<long double>(y) * std::log(1.0L - p) + a * std::log(p);
}

long double oracle_log_pmf_zip(std::int64_t y, long double lambda,
                               long double pi) {
  if (y == 0) return std::log(pi + (1.0L - pi) * std::exp(-lambda));
  return std::log(1.0L - pi) + oracle_log_pmf_poisson(y, lambda);
}

long double oracle_log_pmf_zinb(std::int64_t y, long double lambda,
                                long double pi, long double k) {
  const long double p = 1.0L / (1.0L + k * lambda);
  if (y == 0) return std::log(pi + (1.0L - pi) * std::pow(p, 1.0L / k));
  return std::log(1.0L - pi) + oracle_log_pmf_nb(y, lambda, k);
}

Eigen::VectorXd oracle_fd_gradient(const ScalarFn& fn, const Eigen::VectorXd& x) {
  Eigen::VectorXd grad(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = 1e-5 * std::max(1.0, std::abs(x(j)));
    probe(j) = x(j) + h;
    const double up = fn(probe);
    probe(j) = x(j) - h;
    const double down = fn(probe);
    probe(j) = x(j);
    grad(j) = (up - down) / (2.0 * h);
  }
  return grad;
}

Eigen::MatrixXd oracle_fd_hessian(const ScalarFn& fn, const Eigen::VectorXd& x) {
  const Eigen::Index dim = x.size();
  Eigen::MatrixXd hess(dim, dim);
  Eigen::VectorXd probe = x;
  auto step = [&](Eigen::Index j) { return 1e-4 * std::max(1.0, std::abs(x(j))); };
  const double f0 = fn(x);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double hi = step(i);
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double hj = step(j);
      if (i == j) {
        probe(i) = x(i) + hi;
        const double up = fn(probe);
        probe(i) = x(i) - hi;
        const double down = fn(probe);
        probe(i) = x(i);
        hess(i, i) = (up - 2.0 * f0 + down) / (hi * hi);
      } else {
        probe(i) = x(i) + hi;
        probe(j) = x(j) + hj;
        const double pp = fn(probe);
        probe(j) = x(j) - hj;
        const double pm = fn(probe);
        probe(i) = x(i) - hi;
        const double mm = fn(probe);
        probe(j) = x(j) + hj;
        const double mp = fn(probe);
        probe(i) = x(i);
        probe(j) = x(j);
        hess(i, j) = hess(j, i) = (pp - pm - mp + mm) / (4.0 * hi * hj);
      }
    }
  }
  return hess;
}

Dataset random_dataset(RngStream& rng, int n, bool with_zero_part,
                       std::int64_t max_count) {
  std::vector<std::int64_t> y(static_cast<std::size_t>(n));
  for (auto& yi : y) {
    if (rng.uniform() < 0.35) {
      yi = 0;
    } else {
      yi = static_cast<std::int64_t>(rng.uniform() * static_cast<double>(max_count)) + 1;
      if (yi > max_count) yi = max_count;
    }
  }
  Eigen::MatrixXd x(n, 3);
  x.col(0).setOnes();
  for (int i = 0; i < n; ++i) {
    x(i, 1) = rng.uniform() < 0.5 ? 0.0 : 1.0;
    x(i, 2) = sample_normal(rng);
  }
  Eigen::MatrixXd z(n, 0);
  std::vector<std::string> z_names;
  if (with_zero_part) {
    z.resize(n, 2);
    z.col(0).setOnes();
    for (int i = 0; i < n; ++i) z(i, 1) = sample_normal(rng);
    z_names = {"(Intercept)", "z1"};
  }
  return Dataset(std::move(y), std::move(x), {"(Intercept)", "x1", "x2"},
                 std::move(z), std::move(z_names));
}

ParameterVector random_params(RngStream& rng, ModelKind kind, Eigen::Index p,
                              Eigen::Index q) {
  ParameterVector params;
  params.beta.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    params.beta(j) = (rng.uniform() - 0.5) * (j == 0 ? 2.0 : 1.0);
  }
  if (has_zero_part(kind)) {
    params.alpha.resize(q);
    for (Eigen::Index j = 0; j < q; ++j) params.alpha(j) = (rng.uniform() - 0.5) * 2.0;
  } else {
    params.alpha.resize(0);
  }
  if (has_dispersion(kind)) {
    params.log_k = std::log(0.2 + 2.0 * rng.uniform());
  }
  return params;
}

}  // namespace zic::test
