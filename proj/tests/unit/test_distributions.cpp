#include <doctest.h>

#include <cmath>

#include "distributions.hpp"
#include "errors.hpp"
#include "numerics.hpp"
#include "oracles.hpp"
#include "rng.hpp"

using namespace zic;

namespace {

// Sums exp(log_pmf(y)) until the running tail bound drops below 1e-12.
template <typename LogPmf>
double pmf_total_mass(LogPmf&& log_pmf, double mean, double sd) {
  CompensatedSum total;
  double tail = 1.0;
  std::int64_t y = 0;
  const auto y_floor = static_cast<std::int64_t>(mean + 12.0 * sd) + 32;
  while (y <= y_floor || tail > 1e-12) {
    const double mass = std::exp(log_pmf(y));
    total.add(mass);
    tail = mass * static_cast<double>(y + 1);  // crude geometric-ish bound
    ++y;
    REQUIRE(y < 200000);
  }
  return total.value();
}

}  // namespace

TEST_CASE("poisson log pmf closed forms") {
  CHECK(log_pmf_poisson(0, 1.0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(log_pmf_poisson(2, 2.0) ==
        doctest::Approx(std::log(2.0) - 2.0).epsilon(1e-14));
  // high-precision oracle value for an arbitrary point
  CHECK(log_pmf_poisson(10, 3.18) ==
        doctest::Approx(-6.715600605154660626).epsilon(1e-14));
  CHECK(static_cast<double>(test::oracle_log_pmf_poisson(10, 3.18L)) ==
        doctest::Approx(log_pmf_poisson(10, 3.18)).epsilon(1e-14));
}

TEST_CASE("poisson log pmf rejects bad lambda") {
  CHECK_THROWS_AS(log_pmf_poisson(1, 0.0), Error);
  CHECK_THROWS_AS(log_pmf_poisson(1, -2.0), Error);
  CHECK_THROWS_AS(log_pmf_poisson(1, std::numeric_limits<double>::quiet_NaN()),
                  Error);
  CHECK_THROWS_AS(log_pmf_poisson(-1, 1.0), Error);
}

TEST_CASE("negative binomial log pmf") {
  // k = 1: zero mass is p = 1/(1+lambda)
  CHECK(log_pmf_nb(0, 2.0, 1.0) ==
        doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-14));
  // frozen high-precision value
  CHECK(log_pmf_nb(5, 3.0, 2.5) ==
        doctest::Approx(-3.268303708303295388).epsilon(1e-13));
  CHECK(static_cast<double>(test::oracle_log_pmf_nb(5, 3.0L, 2.5L)) ==
        doctest::Approx(log_pmf_nb(5, 3.0, 2.5)).epsilon(1e-13));
  CHECK_THROWS_AS(log_pmf_nb(1, 2.0, 0.0), Error);
  CHECK_THROWS_AS(log_pmf_nb(1, 0.0, 1.0), Error);
}

TEST_CASE("negative binomial k->0 matches poisson") {
  CHECK(log_pmf_nb(3, 2.0, 1e-10) ==
        doctest::Approx(log_pmf_poisson(3, 2.0)).epsilon(1e-6));
  for (std::int64_t y : {0, 1, 5, 17, 50}) {
    for (double lambda : {0.3, 2.0, 9.5, 20.0}) {
      CHECK(std::abs(log_pmf_nb(y, lambda, 1e-8) - log_pmf_poisson(y, lambda)) <
            1e-5);
    }
  }
}

TEST_CASE("zip log pmf") {
  CHECK(log_pmf_zip(0, 1.0, 0.0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(log_pmf_zip(0, 2.0, 0.5) ==
        doctest::Approx(std::log(0.5 + 0.5 * std::exp(-2.0))).epsilon(1e-14));
  CHECK(log_pmf_zip(0, 2.0, 0.5) ==
        doctest::Approx(-0.5662191695169728130).epsilon(1e-14));
  // composition identity for positive counts
  CHECK(log_pmf_zip(4, 2.0, 0.3) ==
        doctest::Approx(std::log(0.7) + log_pmf_poisson(4, 2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(log_pmf_zip(0, 2.0, 1.0), Error);
  CHECK_THROWS_AS(log_pmf_zip(0, 2.0, -0.1), Error);
}

TEST_CASE("zip zero branch survives huge lambda") {
  // direct pi + (1-pi)exp(-lambda) would underflow at lambda = 800
  const double v = log_pmf_zip(0, 800.0, 0.25);
  CHECK(std::isfinite(v));
  CHECK(v == doctest::Approx(std::log(0.25)).epsilon(1e-12));
}

TEST_CASE("zip pi=0 equals poisson across counts") {
  for (std::int64_t y : {0, 1, 2, 7, 23}) {
    CHECK(std::abs(log_pmf_zip(y, 3.7, 0.0) - log_pmf_poisson(y, 3.7)) < 1e-12);
  }
}

TEST_CASE("zinb log pmf") {
  CHECK(log_pmf_zinb(0, 2.0, 0.0, 1.0) ==
        doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-14));
  CHECK(log_pmf_zinb(0, 2.0, 0.5, 1e-10) ==
        doctest::Approx(log_pmf_zip(0, 2.0, 0.5)).epsilon(1e-6));
  CHECK(log_pmf_zinb(3, 1.5, 0.2, 2.5) ==
        doctest::Approx(-3.051676959852618074).epsilon(1e-13));
  CHECK(static_cast<double>(test::oracle_log_pmf_zinb(3, 1.5L, 0.2L, 2.5L)) ==
        doctest::Approx(log_pmf_zinb(3, 1.5, 0.2, 2.5)).epsilon(1e-13));
}

TEST_CASE("log pmfs sum to one") {
  const double t1 = pmf_total_mass([](std::int64_t y) { return log_pmf_poisson(y, 7.3); },
                                   7.3, std::sqrt(7.3));
  CHECK(t1 == doctest::Approx(1.0).epsilon(1e-9));

  const double nb_sd = std::sqrt(3.0 * (1.0 + 2.5 * 3.0));
  const double t2 = pmf_total_mass([](std::int64_t y) { return log_pmf_nb(y, 3.0, 2.5); },
                                   3.0, nb_sd);
  CHECK(t2 == doctest::Approx(1.0).epsilon(1e-9));

  const double t3 = pmf_total_mass([](std::int64_t y) { return log_pmf_zip(y, 4.2, 0.35); },
                                   4.2, 4.0);
  CHECK(t3 == doctest::Approx(1.0).epsilon(1e-9));

  const double t4 = pmf_total_mass(
      [](std::int64_t y) { return log_pmf_zinb(y, 2.4, 0.3, 1.5); }, 2.4, 5.0);
  CHECK(t4 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("log factorial table agrees with lgamma past the table edge") {
  for (std::int64_t y : {0, 1, 2, 255, 256, 257, 5000}) {
    CHECK(log_factorial(y) ==
          doctest::Approx(std::lgamma(static_cast<double>(y) + 1.0))
              .epsilon(1e-15));
  }
}

TEST_CASE("samplers reproduce and match moments") {
  SUBCASE("identical streams replay") {
    RngStream a(42, 7), b(42, 7);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  }
  SUBCASE("distinct streams differ") {
    RngStream a(42, 0), b(42, 1);
    int same = 0;
    for (int i = 0; i < 64; ++i) same += a.next_u64() == b.next_u64();
    CHECK(same == 0);
  }

  const int draws = 1000000;
  SUBCASE("nb poisson limit") {
    RngStream rng(1, 0);
    double sum = 0, sq = 0;
    for (int i = 0; i < draws; ++i) {
      const double v = static_cast<double>(sample_nb(rng, 3.0, 1e-12));
      sum += v;
      sq += v * v;
    }
    const double mean = sum / draws;
    const double var = sq / draws - mean * mean;
    CHECK(mean == doctest::Approx(3.0).epsilon(0.02));
    CHECK(var == doctest::Approx(3.0).epsilon(0.02));
  }
  SUBCASE("nb variance lambda(1+k lambda)") {
    RngStream rng(2, 0);
    double sum = 0, sq = 0;
    for (int i = 0; i < draws; ++i) {
      const double v = static_cast<double>(sample_nb(rng, 2.0, 1.5));
      sum += v;
      sq += v * v;
    }
    const double mean = sum / draws;
    const double var = sq / draws - mean * mean;
    CHECK(mean == doctest::Approx(2.0).epsilon(0.02));
    CHECK(var == doctest::Approx(8.0).epsilon(0.02));
  }
  SUBCASE("standard lognormal mean exp(1/2)") {
    RngStream rng(3, 0);
    double sum = 0;
    for (int i = 0; i < draws; ++i) sum += sample_lognormal_standard(rng);
    CHECK(sum / draws == doctest::Approx(std::exp(0.5)).epsilon(0.01));
  }
  SUBCASE("poisson across the sampler switchover") {
    for (double lambda : {4.0, 45.0}) {
      RngStream rng(4, static_cast<std::uint64_t>(lambda));
      double sum = 0, sq = 0;
      for (int i = 0; i < draws; ++i) {
        const double v = static_cast<double>(sample_poisson(rng, lambda));
        sum += v;
        sq += v * v;
      }
      const double mean = sum / draws;
      const double var = sq / draws - mean * mean;
      // 3 Monte Carlo standard errors
      const double mean_tol = 3.0 * std::sqrt(lambda / draws);
      CHECK(std::abs(mean - lambda) < mean_tol);
      CHECK(std::abs(var - lambda) < 3.0 * lambda * std::sqrt(2.0 / draws) + mean_tol);
    }
  }
  SUBCASE("gamma moments") {
    RngStream rng(5, 0);
    double sum = 0, sq = 0;
    const double shape = 0.4, scale = 2.5;  // exercises the shape<1 boost
    for (int i = 0; i < draws; ++i) {
      const double v = sample_gamma(rng, shape, scale);
      sum += v;
      sq += v * v;
    }
    const double mean = sum / draws;
    const double var = sq / draws - mean * mean;
    CHECK(mean == doctest::Approx(shape * scale).epsilon(0.02));
    CHECK(var == doctest::Approx(shape * scale * scale).epsilon(0.03));
  }
}
