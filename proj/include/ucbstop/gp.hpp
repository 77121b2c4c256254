#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ucbstop/golden.hpp"
#include "ucbstop/kernels.hpp"

namespace ucbstop::gp {

class FitError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::array<double, 6> kJitterLadder = {
    0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6};

/// Exact GP posterior backed by a Cholesky factor of K + (noise + jitter) I.
/// Mean queries are O(n) against precomputed weights, variance queries are a
/// single triangular solve.
class GpPosterior {
 public:
  GpPosterior() = default;

  static GpPosterior fit(std::vector<Eigen::VectorXd> xs, std::vector<double> ys,
                         KernelSpec kernel, double noise_var) {
    if (xs.size() != ys.size()) {
      throw std::invalid_argument("GpPosterior::fit: |xs| != |ys|");
    }
    if (!(noise_var >= 0.0)) {
      throw std::invalid_argument("GpPosterior::fit: negative noise variance");
    }
    GpPosterior gp;
    gp.kernel_ = kernel;
    gp.noise_var_ = noise_var;
    gp.xs_ = std::move(xs);
    gp.ys_ = std::move(ys);
    const int n = static_cast<int>(gp.xs_.size());
    if (n == 0) return gp;

    Eigen::MatrixXd K(n, n);
    for (int i = 0; i < n; ++i) {
      K(i, i) = kernel_eval(kernel, gp.xs_[i], gp.xs_[i]);
      for (int j = 0; j < i; ++j) {
        const double v = kernel_eval(kernel, gp.xs_[i], gp.xs_[j]);
        K(i, j) = v;
        K(j, i) = v;
      }
    }

    bool ok = false;
    for (double jitter : kJitterLadder) {
      Eigen::MatrixXd A = K;
      A.diagonal().array() += noise_var + jitter;
      Eigen::LLT<Eigen::MatrixXd> llt(A);
      if (llt.info() != Eigen::Success) continue;
      Eigen::MatrixXd L = llt.matrixL();
      const double dmin = L.diagonal().minCoeff();
      const double dmax = L.diagonal().maxCoeff();
      if (!(dmin > 1e-12 * dmax)) continue;
      gp.L_ = std::move(L);
      gp.jitter_ = jitter;
      ok = true;
      break;
    }
    if (!ok) {
      throw FitError(
          "GpPosterior::fit: Cholesky failed for all jitters in "
          "{0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6}");
    }

    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(gp.ys_.data(), n);
    gp.w_ = gp.L_.triangularView<Eigen::Lower>().solve(y);
    gp.L_.triangularView<Eigen::Lower>().transpose().solveInPlace(gp.w_);
    gp.lml_ = -0.5 * y.dot(gp.w_) -
              gp.L_.diagonal().array().log().sum() -
              0.5 * n * std::log(2.0 * M_PI);
    return gp;
  }

  /// Posterior mean and variance at x. The empty posterior is the prior:
  /// mean 0, variance k(x, x). Variance is clamped to [0, k(x, x)].
  [[nodiscard]] std::pair<double, double> posterior(const Eigen::VectorXd& x) const {
    const double kxx = 1.0;
    const int n = size();
    if (n == 0) return {0.0, kxx};
    if (x.size() != xs_[0].size()) {
      throw std::invalid_argument("GpPosterior::posterior: dimension mismatch");
    }
    Eigen::VectorXd kv(n);
    for (int i = 0; i < n; ++i) kv[i] = kernel_eval(kernel_, x, xs_[i]);
    const double mean = kv.dot(w_);
    Eigen::VectorXd z = L_.triangularView<Eigen::Lower>().solve(kv);
    double var = kxx - z.squaredNorm();
    if (var < 0.0) var = 0.0;
    if (var > kxx) var = kxx;
    return {mean, var};
  }

  [[nodiscard]] double log_marginal_likelihood() const noexcept { return lml_; }
  [[nodiscard]] int size() const noexcept { return static_cast<int>(xs_.size()); }
  [[nodiscard]] const KernelSpec& kernel() const noexcept { return kernel_; }
  [[nodiscard]] double noise_variance() const noexcept { return noise_var_; }
  [[nodiscard]] double applied_jitter() const noexcept { return jitter_; }
  [[nodiscard]] const std::vector<Eigen::VectorXd>& inputs() const noexcept {
    return xs_;
  }
  [[nodiscard]] const std::vector<double>& observations() const noexcept {
    return ys_;
  }

 private:
  std::vector<Eigen::VectorXd> xs_;
  std::vector<double> ys_;
  KernelSpec kernel_{};
  double noise_var_ = 0.0;
  double jitter_ = 0.0;
  Eigen::MatrixXd L_;
  Eigen::VectorXd w_;
  double lml_ = 0.0;
};

/// Type-II maximum likelihood over the lengthscale on [lo, hi]: eight
/// log-spaced starts, then golden-section ascent around the best start.
/// Degenerate data (fewer than two distinct inputs) falls back to the
/// midpoint of the log-parameterized search space, sqrt(lo * hi).
[[nodiscard]] inline KernelSpec fit_hyperparams(
    const std::vector<Eigen::VectorXd>& xs, const std::vector<double>& ys,
    KernelFamily family, double noise_var, double lo = 0.05, double hi = 2.0) {
  if (!(lo > 0.0) || !(hi > lo)) {
    throw std::invalid_argument("fit_hyperparams: need 0 < lo < hi");
  }
  bool distinct = false;
  for (std::size_t i = 1; i < xs.size() && !distinct; ++i) {
    if ((xs[i] - xs[0]).norm() > 0.0) distinct = true;
  }
  if (!distinct) return {family, std::sqrt(lo * hi)};

  const auto neg_lml = [&](double log_l) {
    try {
      return -GpPosterior::fit(xs, ys, {family, std::exp(log_l)}, noise_var)
                  .log_marginal_likelihood();
    } catch (const FitError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  constexpr int kStarts = 8;
  const double llo = std::log(lo), lhi = std::log(hi);
  std::array<double, kStarts> grid{}, val{};
  int best = 0;
  for (int k = 0; k < kStarts; ++k) {
    grid[k] = llo + (lhi - llo) * k / (kStarts - 1);
    val[k] = neg_lml(grid[k]);
    if (val[k] < val[best]) best = k;
  }
  const double blo = grid[std::max(0, best - 1)];
  const double bhi = grid[std::min(kStarts - 1, best + 1)];
  auto [xb, fb] = detail::golden_min(neg_lml, blo, bhi, 1e-4, 40);
  if (val[best] < fb) {
    xb = grid[best];
  }
  return {family, std::exp(xb)};
}

}  // namespace ucbstop::gp
