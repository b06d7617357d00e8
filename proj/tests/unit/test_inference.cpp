#include <doctest.h>

#include <cmath>

#include "errors.hpp"
#include "inference.hpp"
#include "model.hpp"
#include "numerics.hpp"
#include "oracles.hpp"
#include "rng.hpp"
#include "simulation.hpp"

using namespace zic;

namespace {

Dataset sim_dataset(ModelKind generator, int n, std::uint64_t seed,
                    double k = 0.0) {
  RngStream rng(seed, 0);
  const auto [x1, x2] = generate_covariates(rng, n);
  Eigen::MatrixXd m(n, 3);
  m.col(0).setOnes();
  m.col(1) = x1;
  m.col(2) = x2;
  ParameterVector truth;
  truth.alpha.resize(3);
  truth.alpha << 0.6, -2.0, 0.25;
  truth.beta.resize(3);
  truth.beta << 0.25, 0.4, 0.25;
  if (generator == ModelKind::Mzinb) truth.log_k = std::log(k);
  const auto y = generate_response(rng, generator, truth, m, m);
  const std::vector<std::string> names = {"(Intercept)", "x1", "x2"};
  return Dataset(y, m, names, m, names);
}

}  // namespace

TEST_CASE("constant idr for marginal kinds") {
  const Dataset data = sim_dataset(ModelKind::Mzip, 500, 61);
  const FitResult res = fit(ModelKind::Mzip, data);
  const IdrReport report = idr(res, data, 1);  // x1
  CHECK(report.constant);
  CHECK(report.idr == doctest::Approx(std::exp(res.estimates.beta(1))).epsilon(1e-14));
  REQUIRE(report.ci_95.has_value());
  CHECK(report.ci_95->first < report.idr);
  CHECK(report.idr < report.ci_95->second);

  // exact Wald CI on the log scale
  const double se = res.std_errors(res.estimates.alpha.size() + 1);
  CHECK(report.ci_95->first ==
        doctest::Approx(std::exp(res.estimates.beta(1) - 1.959964 * se))
            .epsilon(1e-12));
}

TEST_CASE("idr with beta_j = 0 is exactly 1 and the CI spans it") {
  const Dataset data = sim_dataset(ModelKind::Mzip, 200, 62);
  FitResult res = fit(ModelKind::Mzip, data);
  res.estimates.beta(1) = 0.0;  // force the point estimate
  const IdrReport report = idr(res, data, 1);
  CHECK(report.idr == 1.0);
  CHECK(report.ci_95->first < 1.0);
  CHECK(report.ci_95->second > 1.0);
}

TEST_CASE("idr rejects the intercept") {
  const Dataset data = sim_dataset(ModelKind::Mzip, 100, 63);
  const FitResult res = fit(ModelKind::Mzip, data);
  CHECK_THROWS_AS(idr(res, data, 0), Error);
}

TEST_CASE("marginal idr ignores the other covariates' values") {
  const Dataset data = sim_dataset(ModelKind::Mzinb, 400, 64, 1.5);
  const FitResult res = fit(ModelKind::Mzinb, data);
  const IdrReport a = idr(res, data, 2);

  // same fit, different dataset rows: the constant IDR cannot change
  const Dataset other = sim_dataset(ModelKind::Mzinb, 150, 65, 1.5);
  const IdrReport b = idr(res, other, 2);
  CHECK(a.idr == b.idr);
  CHECK(a.ci_95->first == b.ci_95->first);
}

TEST_CASE("latent-class idr varies by profile per the ratio formula") {
  const Dataset data = sim_dataset(ModelKind::Mzip, 300, 66);
  const FitResult res = fit(ModelKind::Zip, data);
  const IdrReport report = idr(res, data, 1);
  CHECK(!report.constant);
  CHECK(report.profiles.size() == static_cast<std::size_t>(data.n()));

  const double beta_j = res.estimates.beta(1);
  const double alpha_j = res.estimates.alpha(1);
  for (const auto& [s, value] : report.profiles) {
    const double expected =
        std::exp(beta_j) * (1.0 + std::exp(s)) / (1.0 + std::exp(s + alpha_j));
    CHECK(value == doctest::Approx(expected).epsilon(1e-10));
  }

  SUBCASE("alpha_j = 0 collapses the profiles to exp(beta_j)") {
    FitResult flat = res;
    flat.estimates.alpha(1) = 0.0;
    const IdrReport collapsed = idr(flat, data, 1);
    double lo = 1e300, hi = -1e300;
    for (const auto& [s, value] : collapsed.profiles) {
      (void)s;
      lo = std::min(lo, value);
      hi = std::max(hi, value);
    }
    CHECK(lo == doctest::Approx(std::exp(flat.estimates.beta(1))).epsilon(1e-12));
    CHECK(hi - lo < 1e-12);
  }

  SUBCASE("profile spread shrinks as alpha_j -> 0") {
    double previous_spread = 1e300;
    for (double scale : {1.0, 0.5, 0.1, 0.01}) {
      FitResult shrunk = res;
      shrunk.estimates.alpha(1) = res.estimates.alpha(1) * scale;
      const IdrReport r = idr(shrunk, data, 1);
      double lo = 1e300, hi = -1e300;
      for (const auto& [s, value] : r.profiles) {
        (void)s;
        lo = std::min(lo, value);
        hi = std::max(hi, value);
      }
      CHECK(hi - lo < previous_spread);
      previous_spread = hi - lo;
    }
  }
}

TEST_CASE("worked latent-class idr example") {
  // alpha_j = 0.5, profile s = 0: IDR = exp(beta_j) * 2 / (1 + e^{0.5})
  const Dataset data = sim_dataset(ModelKind::Mzip, 50, 67);
  FitResult res = fit(ModelKind::Zip, data);
  res.estimates.beta(1) = 0.3;
  res.estimates.alpha = Eigen::VectorXd::Zero(3);
  res.estimates.alpha(1) = 0.5;

  // build a single-row profile dataset with z'alpha = 0 by zeroing covariates
  std::vector<std::int64_t> y = {1};
  Eigen::MatrixXd m(1, 3);
  m << 1.0, 0.0, 0.0;
  FitResult probe = res;
  probe.estimates.alpha(0) = 0.0;  // z'alpha = 0 at the row
  const Dataset row(y, m, data.x_names(), m, data.z_names());
  const IdrReport report = idr(probe, row, 1);
  REQUIRE(report.profiles.size() == 1);
  CHECK(report.profiles[0].second ==
        doctest::Approx(std::exp(0.3) * 2.0 / (1.0 + std::exp(0.5)))
            .epsilon(1e-12));
}

TEST_CASE("predict marginal mean") {
  const Dataset data = sim_dataset(ModelKind::Mzinb, 400, 68, 1.5);
  const FitResult res = fit(ModelKind::Mzinb, data);

  // training rows reproduce model-core marginal means
  const Eigen::VectorXd mu = predict_marginal_mean(res, data.x(), data.z());
  for (Eigen::Index i = 0; i < 10; ++i) {
    CHECK(mu(i) == doctest::Approx(marginal_mean(ModelKind::Mzinb, res.estimates,
                                                 data.x().row(i), data.z().row(i)))
                       .epsilon(1e-14));
  }

  // intercept-only row under a poisson fit: exp(beta0)
  const Dataset pois_data(data.y(), data.x(), data.x_names(),
                          Eigen::MatrixXd(data.n(), 0), {});
  const FitResult pois = fit(ModelKind::Poisson, pois_data);
  Eigen::MatrixXd row(1, 3);
  row << 1.0, 0.0, 0.0;
  const Eigen::VectorXd mu0 =
      predict_marginal_mean(pois, row, Eigen::MatrixXd(1, 0));
  CHECK(mu0(0) == doctest::Approx(std::exp(pois.estimates.beta(0))).epsilon(1e-14));

  // saturated zero part drives the latent-class mean to ~0
  const FitResult zip = fit(ModelKind::Zip, data);
  FitResult saturated = zip;
  saturated.estimates.alpha << 30.0, 0.0, 0.0;
  const Eigen::VectorXd tiny = predict_marginal_mean(saturated, row, row);
  CHECK(tiny(0) < std::exp(saturated.estimates.beta(0)) * 1e-12 + 1e-12);

  // column mismatch is an error
  Eigen::MatrixXd bad(1, 2);
  bad << 1.0, 0.0;
  CHECK_THROWS_AS(predict_marginal_mean(res, bad, row), Error);
}
