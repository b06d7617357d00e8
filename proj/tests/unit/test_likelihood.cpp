#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "likelihood.hpp"
#include "numerics.hpp"
#include "oracles.hpp"
#include "rng.hpp"

using namespace zic;

namespace {

// 20-observation synthetic dataset shared by the frozen-total checks. The
// expected values below were computed from the closed-form likelihoods with
// 40-digit arithmetic.
Dataset frozen_dataset() {
  std::vector<std::int64_t> y = {0, 1, 2, 0, 3, 0, 5, 1, 0, 2,
                                 0, 4, 1, 0, 0, 2, 7, 0, 1, 3};
  Eigen::MatrixXd x(20, 3), z(20, 2);
  for (int i = 0; i < 20; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = i % 2;
    x(i, 2) = 0.1 * i;
    z(i, 0) = 1.0;
    z(i, 1) = 0.1 * i;
  }
  return Dataset(std::move(y), std::move(x), {"(Intercept)", "x1", "x2"},
                 std::move(z), {"(Intercept)", "z1"});
}

ParameterVector frozen_params(ModelKind kind) {
  ParameterVector params;
  params.beta.resize(3);
  params.beta << 0.2, 0.25, -0.1;
  if (has_zero_part(kind)) {
    params.alpha.resize(2);
    params.alpha << 0.3, -0.4;
  } else {
    params.alpha.resize(0);
  }
  if (has_dispersion(kind)) params.log_k = std::log(0.7);
  return params;
}

double frozen_total(ModelKind kind) {
  switch (kind) {
    case ModelKind::Poisson: return -41.34897724080142252;
    case ModelKind::NegBin: return -35.97095290516950989;
    case ModelKind::Zip: return -42.60980478203934629;
    case ModelKind::Zinb: return -39.42054483901666996;
    case ModelKind::Mzip: return -37.89108233917528290;
    case ModelKind::Mzinb: return -37.27844604458264653;
  }
  return 0.0;
}

}  // namespace

TEST_CASE("loglik totals match the high-precision oracle for all six models") {
  const Dataset data = frozen_dataset();
  for (ModelKind kind : kAllModelKinds) {
    const auto value = loglik(kind, frozen_params(kind), data, true);
    CAPTURE(model_kind_name(kind));
    CHECK(value.total == doctest::Approx(frozen_total(kind)).epsilon(1e-13));
    REQUIRE(value.per_obs.has_value());
    const double naive =
        std::accumulate(value.per_obs->data(),
                        value.per_obs->data() + value.per_obs->size(), 0.0);
    CHECK(std::abs(value.total - naive) <= 1e-9 * static_cast<double>(data.n()));
  }
}

TEST_CASE("loglik is permutation stable") {
  RngStream rng(31, 0);
  const Dataset data = test::random_dataset(rng, 50, true);

  // rebuild with rows reversed
  std::vector<std::int64_t> y_rev(data.y().rbegin(), data.y().rend());
  const Dataset reversed(y_rev, data.x().colwise().reverse(), data.x_names(),
                         data.z().colwise().reverse(), data.z_names());

  for (ModelKind kind : kAllModelKinds) {
    const ParameterVector params = test::random_params(rng, kind, 3, 2);
    const double a = loglik(kind, params, data).total;
    const double b = loglik(kind, params, reversed).total;
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("mzip with alpha -> -inf equals poisson") {
  RngStream rng(32, 0);
  const Dataset data = test::random_dataset(rng, 40, true, 30);
  ParameterVector mzip;
  mzip.beta.resize(3);
  mzip.beta << 0.4, 0.2, -0.3;
  mzip.alpha.resize(2);
  mzip.alpha << -50.0, 0.0;
  ParameterVector pois;
  pois.beta = mzip.beta;
  pois.alpha.resize(0);
  const double a = loglik(ModelKind::Mzip, mzip, data).total;
  const double b = loglik(ModelKind::Poisson, pois, data).total;
  CHECK(std::abs(a - b) < 1e-6);
}

TEST_CASE("mzinb with log_k = -25 equals mzip") {
  RngStream rng(33, 0);
  const Dataset data = test::random_dataset(rng, 40, true, 50);
  ParameterVector params = test::random_params(rng, ModelKind::Mzinb, 3, 2);
  params.log_k = -25.0;
  ParameterVector mzip = params;
  mzip.log_k.reset();
  const double a = loglik(ModelKind::Mzinb, params, data).total;
  const double b = loglik(ModelKind::Mzip, mzip, data).total;
  CHECK(std::abs(a - b) < 1e-4);
}

TEST_CASE("invalid points flag as non-finite rather than throwing") {
  const Dataset data = frozen_dataset();
  ParameterVector params = frozen_params(ModelKind::Poisson);
  params.beta << 800.0, 0.0, 0.0;  // lambda overflows
  const auto value = loglik(ModelKind::Poisson, params, data);
  CHECK(!std::isfinite(value.total));

  // extremely negative log_k must not crash either (k underflows to 0)
  ParameterVector nb = frozen_params(ModelKind::NegBin);
  nb.log_k = -800.0;
  const auto nb_value = loglik(ModelKind::NegBin, nb, data);
  CHECK(std::isfinite(nb_value.total));
  CHECK(nb_value.total ==
        doctest::Approx(frozen_total(ModelKind::Poisson)).epsilon(1e-12));
}

TEST_CASE("gradient is near zero at a poisson closed-form optimum") {
  // single observation y=1, X=[1]: MLE at beta = log(1) = 0
  std::vector<std::int64_t> y = {1};
  Eigen::MatrixXd x(1, 1);
  x << 1.0;
  const Dataset data(y, x, {"(Intercept)"}, Eigen::MatrixXd(1, 0), {});
  const ParamLayout layout(ModelKind::Poisson, data);
  Eigen::VectorXd theta(1);
  theta << 0.0;
  const auto grad = loglik_gradient(ModelKind::Poisson, theta, layout, data);
  REQUIRE(grad.has_value());
  CHECK(std::abs((*grad)(0)) < 1e-6);
}

TEST_CASE("gradient doubles when the dataset is duplicated") {
  RngStream rng(34, 0);
  const Dataset data = test::random_dataset(rng, 25, true);

  // stack the dataset on itself
  std::vector<std::int64_t> y2 = data.y();
  y2.insert(y2.end(), data.y().begin(), data.y().end());
  Eigen::MatrixXd x2(50, 3), z2(50, 2);
  x2 << data.x(), data.x();
  z2 << data.z(), data.z();
  const Dataset doubled(y2, x2, data.x_names(), z2, data.z_names());

  for (ModelKind kind : kAllModelKinds) {
    const ParameterVector params = test::random_params(rng, kind, 3, 2);
    const ParamLayout layout(kind, data);
    const Eigen::VectorXd theta = params.packed();
    const auto g1 = loglik_gradient(kind, theta, layout, data);
    const auto g2 = loglik_gradient(kind, theta, layout, doubled);
    REQUIRE(g1.has_value());
    REQUIRE(g2.has_value());
    for (Eigen::Index j = 0; j < theta.size(); ++j) {
      CHECK(std::abs((*g2)(j) - 2.0 * (*g1)(j)) <=
            1e-8 * std::max(1.0, std::abs((*g2)(j))));
    }
  }
}

TEST_CASE("gradient matches the independent finite-difference oracle") {
  RngStream rng(35, 0);
  for (ModelKind kind : kAllModelKinds) {
    for (int trial = 0; trial < 5; ++trial) {
      const Dataset data = test::random_dataset(rng, 50, true);
      const ParameterVector params = test::random_params(rng, kind, 3, 2);
      const ParamLayout layout(kind, data);
      const Eigen::VectorXd theta = params.packed();
      const auto grad = loglik_gradient(kind, theta, layout, data);
      REQUIRE(grad.has_value());
      const auto oracle = test::oracle_fd_gradient(
          [&](const Eigen::VectorXd& t) {
            return loglik_packed(kind, t, layout, data);
          },
          theta);
      for (Eigen::Index j = 0; j < theta.size(); ++j) {
        CHECK(std::abs((*grad)(j)-oracle(j)) <=
              1e-4 * std::max(1.0, std::abs(oracle(j))));
      }
    }
  }
}

TEST_CASE("hessian: poisson intercept closed form, symmetry, oracle") {
  // intercept-only Poisson: Hessian = -n e^{beta}
  std::vector<std::int64_t> y = {2, 4, 1, 0, 3, 5, 2, 2};
  Eigen::MatrixXd x(8, 1);
  x.setOnes();
  const Dataset data(y, x, {"(Intercept)"}, Eigen::MatrixXd(8, 0), {});
  const ParamLayout layout(ModelKind::Poisson, data);
  Eigen::VectorXd theta(1);
  theta << 0.4;
  const auto hess = loglik_hessian(ModelKind::Poisson, theta, layout, data);
  REQUIRE(hess.has_value());
  CHECK((*hess)(0, 0) ==
        doctest::Approx(-8.0 * std::exp(0.4)).epsilon(1e-3));

  RngStream rng(36, 0);
  const Dataset rnd = test::random_dataset(rng, 30, true);
  const ParameterVector params = test::random_params(rng, ModelKind::Mzinb, 3, 2);
  const ParamLayout mzinb_layout(ModelKind::Mzinb, rnd);
  const Eigen::VectorXd packed = params.packed();
  const auto h = loglik_hessian(ModelKind::Mzinb, packed, mzinb_layout, rnd);
  REQUIRE(h.has_value());
  CHECK((*h - h->transpose()).cwiseAbs().maxCoeff() == 0.0);

  const auto oracle = test::oracle_fd_hessian(
      [&](const Eigen::VectorXd& t) {
        return loglik_packed(ModelKind::Mzinb, t, mzinb_layout, rnd);
      },
      packed);
  for (Eigen::Index i = 0; i < packed.size(); ++i) {
    for (Eigen::Index j = 0; j < packed.size(); ++j) {
      CHECK(std::abs((*h)(i, j) - oracle(i, j)) <=
            1e-3 * std::max(1.0, std::abs(oracle(i, j))));
    }
  }
}

TEST_CASE("full reduction lattice on a fixed instance") {
  RngStream rng(37, 0);
  const Dataset data = test::random_dataset(rng, 50, true);
  ParameterVector base = test::random_params(rng, ModelKind::Mzinb, 3, 2);

  auto value = [&](ModelKind kind, const ParameterVector& params) {
    return loglik(kind, params, data).total;
  };

  // NB(k->0) = Poisson
  ParameterVector nb = base;
  nb.alpha.resize(0);
  nb.log_k = -25.0;
  ParameterVector pois = nb;
  pois.log_k.reset();
  CHECK(std::abs(value(ModelKind::NegBin, nb) - value(ModelKind::Poisson, pois)) <
        1e-4);

  // ZIP(alpha -> -inf) = Poisson
  ParameterVector zip = base;
  zip.log_k.reset();
  zip.alpha << -300.0, 0.0;
  CHECK(std::abs(value(ModelKind::Zip, zip) - value(ModelKind::Poisson, pois)) <
        1e-6);

  // ZINB(k->0) = ZIP
  ParameterVector zinb = base;
  zinb.log_k = -25.0;
  ParameterVector zip_same = zinb;
  zip_same.log_k.reset();
  CHECK(std::abs(value(ModelKind::Zinb, zinb) - value(ModelKind::Zip, zip_same)) <
        1e-4);

  // MZINB(alpha -> -inf) = NB
  ParameterVector mzinb = base;
  mzinb.alpha << -300.0, 0.0;
  ParameterVector nb_same = mzinb;
  nb_same.alpha.resize(0);
  CHECK(std::abs(value(ModelKind::Mzinb, mzinb) - value(ModelKind::NegBin, nb_same)) <
        1e-6);
}
