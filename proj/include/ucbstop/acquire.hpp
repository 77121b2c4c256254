#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ucbstop/gp.hpp"
#include "ucbstop/refine.hpp"
#include "ucbstop/sobol.hpp"

namespace ucbstop::acquire {

/// Search domain [0, edge]^dim.
struct Box {
  int dim = 1;
  double edge = 1.0;
};

struct AcquisitionQuery {
  double beta = 1.0;
  Box domain{};
  int probe_count = 1024;
  int top_k = 16;
  int refine_evals = 200;
};

struct AcquisitionResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double sigma = 0.0;
};

/// UCB_t(x) = mu(x) + sqrt(beta) * sigma(x). Expects x inside the domain.
[[nodiscard]] inline double ucb_value(const gp::GpPosterior& g, double beta,
                                      const Eigen::VectorXd& x) {
  const auto [mean, var] = g.posterior(x);
  return mean + std::sqrt(beta) * std::sqrt(var);
}

/// Global UCB maximization: a scrambled Sobol probe of the box, local
/// refinement of the best probe points and of every observed input, and a
/// deterministic reduction. rng_seed fixes the probe's digital shift, so
/// identical inputs give identical outputs.
[[nodiscard]] inline AcquisitionResult maximize_acquisition(
    const gp::GpPosterior& g, const AcquisitionQuery& q,
    std::uint64_t rng_seed) {
  if (!std::isfinite(q.beta) || !(q.beta >= 0.0)) {
    throw std::invalid_argument(
        "maximize_acquisition: beta must be finite and nonnegative");
  }
  if (q.domain.dim < 1 || !(q.domain.edge > 0.0)) {
    throw std::invalid_argument("maximize_acquisition: empty domain");
  }
  if (q.probe_count < 1 || q.top_k < 1 || q.refine_evals < 4) {
    throw std::invalid_argument("maximize_acquisition: invalid budget");
  }
  if (g.size() > 0 && g.inputs()[0].size() != q.domain.dim) {
    throw std::invalid_argument(
        "maximize_acquisition: gp/domain dimension mismatch");
  }

  const int d = q.domain.dim;
  const double r = q.domain.edge;
  const auto ucb = [&](const Eigen::VectorXd& x) {
    return ucb_value(g, q.beta, x);
  };

  qmc::Sobol sobol(d, rng_seed);
  const auto flat = sobol.take(static_cast<std::size_t>(q.probe_count));
  std::vector<double> probe_vals(static_cast<std::size_t>(q.probe_count));
  {
    Eigen::VectorXd x(d);
    for (int i = 0; i < q.probe_count; ++i) {
      for (int j = 0; j < d; ++j) {
        x[j] = flat[static_cast<std::size_t>(i) * d + static_cast<std::size_t>(j)] * r;
      }
      probe_vals[static_cast<std::size_t>(i)] = ucb(x);
    }
  }

  const int k = std::min(q.top_k, q.probe_count);
  std::vector<int> order(static_cast<std::size_t>(q.probe_count));
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&](int a, int b) {
                      const double va = probe_vals[static_cast<std::size_t>(a)];
                      const double vb = probe_vals[static_cast<std::size_t>(b)];
                      if (va != vb) return va > vb;
                      return a < b;
                    });

  std::vector<Eigen::VectorXd> starts;
  starts.reserve(static_cast<std::size_t>(k) + static_cast<std::size_t>(g.size()));
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd s(d);
    for (int j = 0; j < d; ++j) {
      s[j] = flat[static_cast<std::size_t>(order[static_cast<std::size_t>(i)]) * d +
                  static_cast<std::size_t>(j)] * r;
    }
    starts.push_back(std::move(s));
  }
  for (const auto& obs : g.inputs()) {
    starts.push_back(obs.cwiseMax(0.0).cwiseMin(r));
  }

  std::vector<std::pair<Eigen::VectorXd, double>> refined(starts.size());
  for (std::size_t s = 0; s < starts.size(); ++s) {
    refined[s] = ucbstop::detail::coordinate_refine(ucb, starts[s], 0.0, r,
                                                    q.refine_evals);
  }
  std::size_t best = 0;
  for (std::size_t s = 1; s < refined.size(); ++s) {
    if (refined[s].second > refined[best].second) best = s;
  }

  AcquisitionResult out;
  out.x = std::move(refined[best].first);
  out.value = refined[best].second;
  out.sigma = std::sqrt(g.posterior(out.x).second);
  return out;
}

}  // namespace ucbstop::acquire
