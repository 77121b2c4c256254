#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ucbstop/kernels.hpp"
#include "ucbstop/refine.hpp"
#include "ucbstop/sobol.hpp"

namespace ucbstop::objectives {

/// A maximization problem on the unit cube [0,1]^dim. Synthetic minimization
/// benchmarks are negated and affinely rescaled from their native domains, so
/// f_star = -(known minimum). regret_scale is the objective's output range,
/// used to express regret on a common [0,1]-ish scale across benchmarks.
struct Objective {
  std::string id;
  int dim = 1;
  std::function<double(const Eigen::VectorXd&)> f;
  double f_star = 0.0;
  Eigen::VectorXd x_star;
  double regret_scale = 1.0;
};

[[nodiscard]] inline double branin(const Eigen::VectorXd& x) {
  const double a = 1.0;
  const double b = 5.1 / (4.0 * M_PI * M_PI);
  const double c = 5.0 / M_PI;
  const double r = 6.0;
  const double s = 10.0;
  const double t = 1.0 / (8.0 * M_PI);
  const double u = x[1] - b * x[0] * x[0] + c * x[0] - r;
  return a * u * u + s * (1.0 - t) * std::cos(x[0]) + s;
}

[[nodiscard]] inline double rosenbrock(const Eigen::VectorXd& x) {
  double sum = 0.0;
  for (int i = 0; i + 1 < x.size(); ++i) {
    const double g = x[i + 1] - x[i] * x[i];
    const double h = 1.0 - x[i];
    sum += 100.0 * g * g + h * h;
  }
  return sum;
}

[[nodiscard]] inline double levy(const Eigen::VectorXd& x) {
  const int d = static_cast<int>(x.size());
  const auto w = [&](int i) { return 1.0 + (x[i] - 1.0) / 4.0; };
  const double s1 = std::sin(M_PI * w(0));
  double sum = s1 * s1;
  for (int i = 0; i + 1 < d; ++i) {
    const double wi = w(i);
    const double sw = std::sin(M_PI * wi + 1.0);
    sum += (wi - 1.0) * (wi - 1.0) * (1.0 + 10.0 * sw * sw);
  }
  const double wd = w(d - 1);
  const double sd = std::sin(2.0 * M_PI * wd);
  sum += (wd - 1.0) * (wd - 1.0) * (1.0 + sd * sd);
  return sum;
}

namespace detail {

inline Objective negated_on_cube(std::string id, Eigen::VectorXd lo,
                                 Eigen::VectorXd hi,
                                 double (*raw)(const Eigen::VectorXd&),
                                 double known_min, Eigen::VectorXd native_argmin,
                                 double regret_scale) {
  Objective o;
  o.id = std::move(id);
  o.dim = static_cast<int>(lo.size());
  o.f = [lo, hi, raw](const Eigen::VectorXd& u) {
    const Eigen::VectorXd x = lo.array() + u.array() * (hi - lo).array();
    return -raw(x);
  };
  o.f_star = -known_min;
  o.x_star = ((native_argmin - lo).array() / (hi - lo).array()).matrix();
  o.regret_scale = regret_scale;
  return o;
}

/// Random Fourier features phi(x) = sqrt(2/m) cos(Wx + b); one draw of the
/// amplitudes w makes f(x) = w . phi(x) an approximate GP prior sample.
struct Rff {
  Eigen::MatrixXd W;
  Eigen::VectorXd b;
  Eigen::VectorXd w;

  [[nodiscard]] Eigen::VectorXd features(const Eigen::VectorXd& x) const {
    const double scale = std::sqrt(2.0 / static_cast<double>(W.rows()));
    return scale * ((W * x + b).array().cos()).matrix();
  }

  [[nodiscard]] double eval(const Eigen::VectorXd& x) const {
    return w.dot(features(x));
  }
};

/// Spectral sampling: Gaussian frequencies for the SE kernel; for Matern-5/2
/// the frequencies are multivariate-t distributed, drawn as Gaussian over
/// sqrt(chi-squared / dof) with dof = 5.
inline Rff make_rff(const gp::KernelSpec& kernel, int d, std::uint64_t seed,
                    int feature_count) {
  if (feature_count < 256) {
    throw std::invalid_argument("make_rff: feature_count must be >= 256");
  }
  if (d < 1) throw std::invalid_argument("make_rff: dimension must be >= 1");
  if (!(kernel.lengthscale > 0.0)) {
    throw std::invalid_argument("make_rff: nonpositive lengthscale");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  std::chi_squared_distribution<double> chi2(5.0);

  Rff rff;
  rff.W.resize(feature_count, d);
  rff.b.resize(feature_count);
  rff.w.resize(feature_count);
  for (int j = 0; j < feature_count; ++j) {
    for (int i = 0; i < d; ++i) rff.W(j, i) = gauss(rng);
    if (kernel.family == gp::KernelFamily::Matern52) {
      const double s = chi2(rng);
      rff.W.row(j) *= std::sqrt(5.0 / s);
    }
    rff.W.row(j) /= kernel.lengthscale;
    rff.b[j] = phase(rng);
    rff.w[j] = gauss(rng);
  }
  return rff;
}

}  // namespace detail

[[nodiscard]] inline Objective make_branin() {
  Eigen::VectorXd lo(2), hi(2), xmin(2);
  lo << -5.0, 0.0;
  hi << 10.0, 15.0;
  xmin << M_PI, 2.275;
  // regret_scale = branin(-5, 0) - branin(pi, 2.275), the range over the box.
  return detail::negated_on_cube("branin", lo, hi, &branin,
                                 0.39788735772973816, xmin,
                                 307.7312086538769);
}

[[nodiscard]] inline Objective make_rosenbrock4() {
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(4, -2.0);
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(4, 2.0);
  Eigen::VectorXd xmin = Eigen::VectorXd::Ones(4);
  // regret_scale = rosenbrock(-2,-2,-2,-2), the maximum over the box.
  return detail::negated_on_cube("rosenbrock4", lo, hi, &rosenbrock, 0.0, xmin,
                                 10827.0);
}

[[nodiscard]] inline Objective make_levy4() {
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(4, -10.0);
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(4, 10.0);
  Eigen::VectorXd xmin = Eigen::VectorXd::Ones(4);
  // regret_scale = levy(-10,-10,-10,-10), the maximum over the box.
  return detail::negated_on_cube("levy4", lo, hi, &levy, 0.0, xmin,
                                 254.89842685553828);
}

/// Deterministic draw from an approximate GP prior on [0,1]^d. The recorded
/// optimum is empirical: a 2^15-point scrambled Sobol probe refined from its
/// 32 best points by coordinate-wise golden-section ascent.
[[nodiscard]] inline Objective gp_sample_objective(const gp::KernelSpec& kernel,
                                                   int d, std::uint64_t seed,
                                                   int feature_count = 2048) {
  if (d > qmc::Sobol::kMaxDim) {
    throw std::invalid_argument("gp_sample_objective: dimension must be <= 10");
  }
  auto rff = std::make_shared<const detail::Rff>(
      detail::make_rff(kernel, d, seed, feature_count));

  Objective o;
  o.id = std::string("gp-") +
         (kernel.family == gp::KernelFamily::Matern52 ? "m52" : "se") + "-s" +
         std::to_string(seed);
  o.dim = d;
  o.f = [rff](const Eigen::VectorXd& x) { return rff->eval(x); };

  constexpr int kProbe = 1 << 15;
  constexpr int kRefineStarts = 32;
  constexpr int kRefineEvals = 400;
  qmc::Sobol probe(d, seed);
  std::vector<double> vals(kProbe);
  std::vector<double> flat = probe.take(kProbe);
  {
    Eigen::VectorXd x(d);
    for (int i = 0; i < kProbe; ++i) {
      for (int j = 0; j < d; ++j) {
        x[j] = flat[static_cast<std::size_t>(i) * d + static_cast<std::size_t>(j)];
      }
      vals[static_cast<std::size_t>(i)] = rff->eval(x);
    }
  }
  std::vector<int> order(kProbe);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + kRefineStarts, order.end(),
                    [&](int a, int b) {
                      const double va = vals[static_cast<std::size_t>(a)];
                      const double vb = vals[static_cast<std::size_t>(b)];
                      if (va != vb) return va > vb;
                      return a < b;
                    });
  Eigen::VectorXd best_x(d);
  for (int j = 0; j < d; ++j) {
    best_x[j] = flat[static_cast<std::size_t>(order[0]) * d +
                     static_cast<std::size_t>(j)];
  }
  double best_v = vals[static_cast<std::size_t>(order[0])];
  const auto eval = [&](const Eigen::VectorXd& x) { return rff->eval(x); };
  for (int k = 0; k < kRefineStarts; ++k) {
    Eigen::VectorXd x(d);
    for (int j = 0; j < d; ++j) {
      x[j] = flat[static_cast<std::size_t>(order[static_cast<std::size_t>(k)]) * d +
                  static_cast<std::size_t>(j)];
    }
    auto [xr, vr] = ucbstop::detail::coordinate_refine(eval, std::move(x), 0.0,
                                                       1.0, kRefineEvals);
    if (vr > best_v) {
      best_v = vr;
      best_x = std::move(xr);
    }
  }
  o.f_star = best_v;
  o.x_star = std::move(best_x);
  o.regret_scale = 1.0;
  return o;
}

}  // namespace ucbstop::objectives
