#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "oracle_normal.hpp"
#include "ucbstop/stats.hpp"

using namespace ucbstop::stats;

TEST_CASE("cdf matches the long double oracle") {
  REQUIRE(std_normal_cdf(0.0) == 0.5);
  for (double x = -37.0; x <= 8.0; x += 0.173) {
    const long double want = oracle::std_normal_cdf_ld(x);
    const double got = std_normal_cdf(x);
    REQUIRE_THAT(got, Catch::Matchers::WithinRel(static_cast<double>(want), 1e-12));
  }
}

TEST_CASE("tail matches the long double oracle deep into the tail") {
  for (double x = -8.0; x <= 37.0; x += 0.291) {
    const long double want = oracle::std_normal_tail_ld(x);
    const double got = std_normal_tail(x);
    REQUIRE_THAT(got, Catch::Matchers::WithinRel(static_cast<double>(want), 1e-12));
  }
  REQUIRE_THAT(std_normal_tail(8.0),
               Catch::Matchers::WithinAbs(6.22096057427178e-16, 1e-19));
  REQUIRE_THAT(std_normal_cdf(-8.0),
               Catch::Matchers::WithinAbs(6.22096057427178e-16, 1e-19));
}

TEST_CASE("cdf and tail are symmetric and monotone") {
  // Strict growth is only checkable before the cdf saturates toward 1 in
  // double precision, around x = 8.
  double prev = -1.0;
  for (double x = -8.0; x <= 6.0; x += 0.0913) {
    const double c = std_normal_cdf(x);
    REQUIRE(c > prev);
    prev = c;
    REQUIRE_THAT(std_normal_cdf(x) + std_normal_tail(x),
                 Catch::Matchers::WithinRel(1.0, 1e-14));
  }
  REQUIRE(std_normal_cdf(10.0) >= std_normal_cdf(8.0));
}

TEST_CASE("pdf frozen values") {
  REQUIRE_THAT(std_normal_pdf(0.0),
               Catch::Matchers::WithinRel(0.3989422804014327, 1e-15));
  REQUIRE_THAT(std_normal_pdf(1.0),
               Catch::Matchers::WithinRel(0.24197072451914337, 1e-14));
}

TEST_CASE("quantile frozen values and oracle agreement") {
  REQUIRE(std_normal_quantile(0.5) == 0.0);
  REQUIRE_THAT(std_normal_quantile(0.975),
               Catch::Matchers::WithinAbs(1.959963984540054, 1e-9));
  REQUIRE_THAT(std_normal_quantile(0.0013498980316300946),
               Catch::Matchers::WithinRel(-3.0, 1e-9));
  for (double p : {1e-12, 1e-9, 1e-6, 1e-3, 0.02, 0.2, 0.4, 0.6, 0.9, 0.999}) {
    const long double want = oracle::std_normal_quantile_ld(p);
    REQUIRE_THAT(std_normal_quantile(p),
                 Catch::Matchers::WithinAbs(static_cast<double>(want), 2e-9));
  }
}

TEST_CASE("round trip through the tail is relative accurate") {
  // Sweep the supported tail-mass range on a log grid.
  for (double lq = -300.0; lq <= -0.302; lq += 0.37) {
    const double q = std::pow(10.0, lq);
    const double x = std_normal_upper_quantile(q);
    const double back = std_normal_tail(x);
    REQUIRE_THAT(back, Catch::Matchers::WithinRel(q, 1e-12));
  }
  // Same through the lower-tail api.
  for (double lp = -300.0; lp <= -0.302; lp += 0.37) {
    const double p = std::pow(10.0, lp);
    const double x = std_normal_quantile(p);
    const double back = std_normal_cdf(x);
    REQUIRE_THAT(back, Catch::Matchers::WithinRel(p, 1e-12));
  }
}

TEST_CASE("upper quantile mirrors the lower quantile") {
  for (double q : {1e-8, 1e-4, 0.1, 0.25, 0.5, 0.75, 0.9}) {
    REQUIRE_THAT(std_normal_upper_quantile(q),
                 Catch::Matchers::WithinAbs(-std_normal_quantile(q), 1e-12));
  }
  REQUIRE(std_normal_upper_quantile(0.5) == 0.0);
}

TEST_CASE("domain validation") {
  REQUIRE_THROWS_AS(std_normal_quantile(0.0), std::domain_error);
  REQUIRE_THROWS_AS(std_normal_quantile(1.0), std::domain_error);
  REQUIRE_THROWS_AS(std_normal_quantile(-0.2), std::domain_error);
  REQUIRE_THROWS_AS(std_normal_quantile(std::nan("")), std::domain_error);
  REQUIRE_THROWS_AS(std_normal_upper_quantile(0.0), std::domain_error);
  REQUIRE_THROWS_AS(std_normal_upper_quantile(1.0), std::domain_error);
  REQUIRE_THROWS_AS(std_normal_cdf(std::nan("")), std::domain_error);
  REQUIRE_THROWS_AS(std_normal_tail(std::nan("")), std::domain_error);
}

TEST_CASE("probability type rejects the boundary") {
  REQUIRE_THROWS_AS(Probability(0.0), std::domain_error);
  REQUIRE_THROWS_AS(Probability(1.0), std::domain_error);
  REQUIRE_THROWS_AS(Probability(-0.5), std::domain_error);
  REQUIRE_THROWS_AS(Probability(1.5), std::domain_error);
  REQUIRE_THROWS_AS(Probability(std::nan("")), std::domain_error);
  REQUIRE(Probability(0.5).value() == 0.5);
  REQUIRE(Probability(1e-300).value() == 1e-300);
  REQUIRE(Probability(1.0 - 1e-16).value() == 1.0 - 1e-16);
}
