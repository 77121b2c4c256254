#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "oracle_gp.hpp"
#include "ucbstop/acquire.hpp"
#include "ucbstop/sobol.hpp"

using namespace ucbstop::acquire;
using ucbstop::gp::GpPosterior;
using ucbstop::gp::KernelFamily;
using ucbstop::gp::KernelSpec;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

GpPosterior random_fit(std::mt19937_64& rng, int n, int d, double l,
                       double noise_var, KernelFamily family) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Eigen::VectorXd> xs;
  std::vector<double> ys;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd x(d);
    for (int j = 0; j < d; ++j) x[j] = unif(rng);
    xs.push_back(x);
    ys.push_back(gauss(rng));
  }
  return GpPosterior::fit(xs, ys, {family, l}, noise_var);
}

}  // namespace

TEST_CASE("prior ucb is constant") {
  GpPosterior prior;
  for (double x1 : {0.0, 0.25, 0.9}) {
    REQUIRE_THAT(ucb_value(prior, 4.0, vec({x1, 1.0 - x1})),
                 Catch::Matchers::WithinRel(2.0, 1e-14));
  }
}

TEST_CASE("beta zero reduces ucb to the posterior mean") {
  std::mt19937_64 rng(11);
  const auto g = random_fit(rng, 7, 2, 0.4, 1e-4, KernelFamily::Matern52);
  for (int i = 0; i < 20; ++i) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const auto x = vec({unif(rng), unif(rng)});
    REQUIRE(ucb_value(g, 0.0, x) == g.posterior(x).first);
  }
}

TEST_CASE("ucb composes mean and std per the dense oracle") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Eigen::VectorXd> xs;
  std::vector<double> ys;
  for (int i = 0; i < 5; ++i) {
    xs.push_back(vec({unif(rng), unif(rng)}));
    ys.push_back(gauss(rng));
  }
  const double noise = 1e-3;
  const auto g = GpPosterior::fit(xs, ys, {KernelFamily::SquaredExponential, 0.6}, noise);
  const oracle::DenseOracle ref(xs, ys, false, 0.6, noise);
  for (int i = 0; i < 25; ++i) {
    const auto x = vec({unif(rng), unif(rng)});
    const auto [m, v] = ref.posterior(x);
    const double want = m + std::sqrt(2.5) * std::sqrt(std::max(0.0, v));
    REQUIRE_THAT(ucb_value(g, 2.5, x), Catch::Matchers::WithinAbs(want, 1e-8));
  }
}

TEST_CASE("prior maximization returns sqrt(beta)") {
  GpPosterior prior;
  AcquisitionQuery q;
  q.beta = 9.0;
  q.domain = {3, 1.0};
  const auto res = maximize_acquisition(prior, q, 7);
  REQUIRE_THAT(res.value, Catch::Matchers::WithinAbs(3.0, 1e-9));
  REQUIRE_THAT(res.sigma, Catch::Matchers::WithinAbs(1.0, 1e-12));
  REQUIRE(res.x.size() == 3);
}

TEST_CASE("observed inputs are candidate starts") {
  const auto x1 = vec({0.37});
  const auto g = GpPosterior::fit({x1}, {2.0}, {KernelFamily::SquaredExponential, 0.2}, 1e-8);
  AcquisitionQuery q;
  q.beta = 1.0;
  q.domain = {1, 1.0};
  const auto res = maximize_acquisition(g, q, 1);
  REQUIRE(res.value >= ucb_value(g, q.beta, x1));
}

TEST_CASE("maximization is deterministic given a seed") {
  std::mt19937_64 rng(31);
  const auto g = random_fit(rng, 9, 3, 0.5, 1e-4, KernelFamily::SquaredExponential);
  AcquisitionQuery q;
  q.beta = 4.0;
  q.domain = {3, 1.0};
  const auto a = maximize_acquisition(g, q, 99);
  const auto b = maximize_acquisition(g, q, 99);
  REQUIRE(a.x == b.x);
  REQUIRE(a.value == b.value);
  REQUIRE(a.sigma == b.sigma);
}

TEST_CASE("result dominates its own sobol probe") {
  std::mt19937_64 rng(47);
  for (std::uint64_t seed : {0ULL, 5ULL, 123456ULL}) {
    const auto g = random_fit(rng, 12, 2, 0.3, 1e-4, KernelFamily::Matern52);
    AcquisitionQuery q;
    q.beta = 6.0;
    q.domain = {2, 1.0};
    const auto res = maximize_acquisition(g, q, seed);

    ucbstop::qmc::Sobol probe(2, seed);
    double best = -1e300;
    for (int i = 0; i < q.probe_count; ++i) {
      const auto p = probe.next();
      best = std::max(best, ucb_value(g, q.beta, vec({p[0], p[1]})));
    }
    REQUIRE(res.value >= best - 1e-6);
    REQUIRE_THAT(res.value, Catch::Matchers::WithinAbs(
                                ucb_value(g, q.beta, res.x), 1e-12));
    const auto [mean, var] = g.posterior(res.x);
    (void)mean;
    REQUIRE_THAT(res.sigma * res.sigma, Catch::Matchers::WithinAbs(var, 1e-12));
  }
}

TEST_CASE("returned point stays inside the closed box") {
  std::vector<Eigen::VectorXd> xs = {vec({1.3, -0.2}), vec({0.5, 0.5}),
                                     vec({0.1, 0.9})};
  std::vector<double> ys = {1.0, -0.5, 0.25};
  const auto g = GpPosterior::fit(xs, ys, {KernelFamily::SquaredExponential, 0.4}, 1e-6);
  AcquisitionQuery q;
  q.beta = 2.0;
  q.domain = {2, 1.0};
  for (std::uint64_t seed : {0ULL, 17ULL}) {
    const auto res = maximize_acquisition(g, q, seed);
    for (int j = 0; j < 2; ++j) {
      REQUIRE(res.x[j] >= 0.0);
      REQUIRE(res.x[j] <= 1.0);
    }
  }
}

TEST_CASE("positive scaling of observations keeps the argmax under beta zero") {
  // Noiseless interpolating fits: scaling y scales the mean, so with no
  // exploration bonus every comparison in the search is unchanged.
  std::vector<Eigen::VectorXd> xs = {vec({0.1, 0.2}), vec({0.45, 0.8}),
                                     vec({0.7, 0.3}), vec({0.9, 0.95}),
                                     vec({0.25, 0.6})};
  std::vector<double> ys = {0.3, 1.1, -0.4, 0.8, 0.05};
  std::vector<double> ys_scaled;
  for (double y : ys) ys_scaled.push_back(7.5 * y);
  const KernelSpec spec{KernelFamily::SquaredExponential, 0.35};
  const auto g1 = GpPosterior::fit(xs, ys, spec, 1e-10);
  const auto g2 = GpPosterior::fit(xs, ys_scaled, spec, 1e-10);
  AcquisitionQuery q;
  q.beta = 0.0;
  q.domain = {2, 1.0};
  const auto r1 = maximize_acquisition(g1, q, 3);
  const auto r2 = maximize_acquisition(g2, q, 3);
  REQUIRE((r1.x - r2.x).cwiseAbs().maxCoeff() <= 1e-9);
  REQUIRE_THAT(r2.value, Catch::Matchers::WithinRel(7.5 * r1.value, 1e-6));
}

TEST_CASE("query validation") {
  GpPosterior prior;
  AcquisitionQuery q;
  q.domain = {2, 1.0};

  auto bad = q;
  bad.beta = -1.0;
  REQUIRE_THROWS_AS(maximize_acquisition(prior, bad, 0), std::invalid_argument);
  bad.beta = std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(maximize_acquisition(prior, bad, 0), std::invalid_argument);
  bad.beta = std::numeric_limits<double>::infinity();
  REQUIRE_THROWS_AS(maximize_acquisition(prior, bad, 0), std::invalid_argument);

  bad = q;
  bad.domain = {0, 1.0};
  REQUIRE_THROWS_AS(maximize_acquisition(prior, bad, 0), std::invalid_argument);
  bad.domain = {2, 0.0};
  REQUIRE_THROWS_AS(maximize_acquisition(prior, bad, 0), std::invalid_argument);

  bad = q;
  bad.probe_count = 0;
  REQUIRE_THROWS_AS(maximize_acquisition(prior, bad, 0), std::invalid_argument);

  std::mt19937_64 rng(5);
  const auto g = random_fit(rng, 4, 3, 0.5, 1e-4, KernelFamily::SquaredExponential);
  REQUIRE_THROWS_AS(maximize_acquisition(g, q, 0), std::invalid_argument);
}
