#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "ucbstop/golden.hpp"
#include "ucbstop/stats.hpp"

namespace ucbstop::certify {

inline constexpr double kPiSq6 = 1.6449340668482264;  // pi^2 / 6

class ConfigError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Fixed problem quantities entering beta_t, |D_t|, and the subproblem.
/// r scales the domain, a and b are the smoothness tail constants, n_L
/// splits the failure probability between the main event and the
/// discretization events, and eps_b relaxes the open feasible set so the
/// subproblem search runs over a closed box.
struct ProblemConstants {
  int d = 1;
  double r = 1.0;
  double a = 1.0;
  double b = 1.0;
  double sigma = 0.01;
  double delta = 0.1;
  double n_L = 10.0;
  double eps_b = 1e-6;

  void validate() const {
    if (d < 1) throw ConfigError("ProblemConstants: d must be >= 1");
    if (!(r > 0.0) || !(a > 0.0) || !(b > 0.0)) {
      throw ConfigError("ProblemConstants: r, a, b must be positive");
    }
    if (!(sigma >= 0.0)) {
      throw ConfigError("ProblemConstants: sigma must be nonnegative");
    }
    if (!(delta > 0.0) || !(delta < 1.0)) {
      throw ConfigError("ProblemConstants: delta must lie in (0, 1)");
    }
    if (!(n_L > 1.0)) throw ConfigError("ProblemConstants: n_L must exceed 1");
    if (!(eps_b > 0.0) || !(eps_b < 1.0)) {
      throw ConfigError("ProblemConstants: eps_b must lie in (0, 1)");
    }
    if (!(n_L * d * a / delta > 1.0)) {
      throw ConfigError("ProblemConstants: n_L*d*a/delta must exceed 1");
    }
  }
};

/// Union-bound weight pi_t = pi^2 t^2 / 6.
[[nodiscard]] inline double union_weight(std::int64_t t) {
  const double td = static_cast<double>(t);
  return kPiSq6 * td * td;
}

/// Exploration weight beta_t = 2 log(4 pi_t / delta)
///                            + 4 d log(d t b r sqrt(log(4 d a / delta))).
[[nodiscard]] inline double compute_beta(std::int64_t t,
                                         const ProblemConstants& c) {
  c.validate();
  if (t < 1) throw std::invalid_argument("compute_beta: t must be >= 1");
  const double log_ratio = std::log(4.0 * c.d * c.a / c.delta);
  if (!(log_ratio > 0.0)) {
    throw ConfigError("compute_beta: 4*d*a/delta must exceed 1");
  }
  const double inner =
      c.d * static_cast<double>(t) * c.b * c.r * std::sqrt(log_ratio);
  if (!(inner > 1.0)) {
    throw ConfigError(
        "compute_beta: d*t*b*r*sqrt(log(4*d*a/delta)) must exceed 1");
  }
  return 2.0 * std::log(4.0 * union_weight(t) / c.delta) +
         4.0 * c.d * std::log(inner);
}

/// Universal lower bound on the posterior standard deviation after t
/// observations with a unit-variance prior: sigma * sqrt(1 / (t + sigma^2)).
[[nodiscard]] inline double variance_floor(std::int64_t t, double sigma) {
  if (t < 1) throw std::invalid_argument("variance_floor: t must be >= 1");
  return sigma * std::sqrt(1.0 / (static_cast<double>(t) + sigma * sigma));
}

/// log |D_t| with |D_t| = (r d b)^d log(n_L d a / delta)^{d/2} t^{s d} + 1,
/// kept in log space so large t, s, d never overflow.
[[nodiscard]] inline double log_discretization_size(std::int64_t t, double s,
                                                    const ProblemConstants& c) {
  if (t < 1) {
    throw std::invalid_argument("log_discretization_size: t must be >= 1");
  }
  if (!(s > 0.0)) {
    throw std::invalid_argument("log_discretization_size: s must be positive");
  }
  const double lead =
      c.d * std::log(c.r * c.d * c.b) +
      0.5 * c.d * std::log(std::log(c.n_L * c.d * c.a / c.delta)) +
      s * c.d * std::log(static_cast<double>(t));
  return std::max(lead, 0.0) + std::log1p(std::exp(-std::abs(lead)));
}

[[nodiscard]] inline double discretization_size(std::int64_t t, double s,
                                                const ProblemConstants& c) {
  return std::exp(log_discretization_size(t, s, c));
}

/// Optimal confidence split for one certificate evaluation. The widths
/// sqrt_eta and sqrt_alpha satisfy the implicit tail equations
///   pi_t * n_eta * (1 - Phi(sqrt_eta)) = 1
///   pi_t * n_alpha * |D_t| * (1 - Phi(sqrt_alpha)) = 1
/// with the probability budget delta (1 - 1/n_L) fully allocated.
/// fallback marks the defensive path where the numeric search found no
/// feasible point and the classic split (beta, beta, s=2) was returned.
struct SubproblemSolution {
  double sqrt_eta = 0.0;
  double sqrt_alpha = 0.0;
  double s = 2.0;
  double n_eta = 0.0;
  double n_alpha = 0.0;
  double disc_size = 1.0;
  double objective = std::numeric_limits<double>::infinity();
  bool fallback = false;
};

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr int kGridN = 64;
inline constexpr double kFracMin = 1e-8;
inline constexpr double kSMax = 12.0;

struct SubproblemSearch {
  const ProblemConstants& c;
  std::int64_t t;
  double c1, c2, beta;
  double sqrt_beta, pi, log_pi, budget, tail_beta, cap_eta, s_min;

  SubproblemSearch(const ProblemConstants& consts, std::int64_t t_in,
                   double c1_in, double c2_in, double beta_in)
      : c(consts), t(t_in), c1(c1_in), c2(c2_in), beta(beta_in) {
    sqrt_beta = std::sqrt(beta);
    pi = union_weight(t);
    log_pi = std::log(pi);
    budget = c.delta * (1.0 - 1.0 / c.n_L);
    tail_beta = stats::std_normal_tail(sqrt_beta);
    cap_eta = pi * stats::std_normal_tail(c.eps_b);
    s_min = std::max(c.eps_b, 1e-3);
  }

  [[nodiscard]] double log_disc(double s) const {
    return log_discretization_size(t, s, c);
  }

  // Largest usable eta-mass u at exponent s: leaves enough mass for the
  // alpha equation at alpha <= beta, keeps the split strictly interior,
  // and respects the sqrt_eta >= eps_b relaxation.
  [[nodiscard]] double u_cap(double s) const {
    double vmin = 0.0;
    if (tail_beta > 0.0) {
      vmin = std::exp(log_pi + log_disc(s) + std::log(tail_beta));
    }
    return std::min({budget - vmin, budget * (1.0 - 1e-9), cap_eta});
  }

  struct Widths {
    double sqrt_eta, sqrt_alpha;
  };

  [[nodiscard]] Widths widths_at(double u, double s) const {
    double qe = u / pi;
    if (qe < 1e-300) qe = 1e-300;
    double se = stats::std_normal_upper_quantile(qe);
    if (se < c.eps_b) se = c.eps_b;
    const double v = budget - u;
    double qa = std::exp(std::log(v) - log_pi - log_disc(s));
    if (qa < 1e-300) qa = 1e-300;
    if (qa > 0.5) qa = 0.5;
    double sa = stats::std_normal_upper_quantile(qa);
    if (sa > sqrt_beta) sa = sqrt_beta;
    if (sa < c.eps_b) sa = c.eps_b;
    return {se, sa};
  }

  // Objective g(frac, s) = sqrt_eta c1 + sqrt_alpha c2 + t^{-s} with
  // u = frac * u_cap(s), so every probed point is feasible by construction.
  [[nodiscard]] double value(double frac, double s) const {
    const double uh = u_cap(s);
    if (!(uh > 0.0) || !(frac > 0.0) || frac > 1.0) return kInf;
    const auto w = widths_at(frac * uh, s);
    return w.sqrt_eta * c1 + w.sqrt_alpha * c2 +
           std::pow(static_cast<double>(t), -s);
  }

  [[nodiscard]] SubproblemSolution finish(double frac, double s, double g) const {
    const double uh = u_cap(s);
    const auto w = widths_at(frac * uh, s);
    SubproblemSolution sol;
    sol.sqrt_eta = w.sqrt_eta;
    sol.sqrt_alpha = w.sqrt_alpha;
    sol.s = s;
    sol.n_eta =
        std::exp(-(log_pi + std::log(stats::std_normal_tail(w.sqrt_eta))));
    sol.n_alpha = std::exp(-(log_pi + log_disc(s) +
                             std::log(stats::std_normal_tail(w.sqrt_alpha))));
    sol.disc_size = std::exp(log_disc(s));
    sol.objective = g;
    sol.fallback = false;
    return sol;
  }

  // Classic split (eta = alpha = beta, s = 2); reproduces the classic bound
  // exactly through the identity tightened = sqrt_beta (c1 - c2) + g.
  [[nodiscard]] SubproblemSolution classic_point() const {
    SubproblemSolution sol;
    sol.sqrt_eta = sqrt_beta;
    sol.sqrt_alpha = sqrt_beta;
    sol.s = 2.0;
    sol.n_eta = tail_beta > 0.0 ? std::exp(-(log_pi + std::log(tail_beta)))
                                : kInf;
    sol.n_alpha = tail_beta > 0.0
                      ? std::exp(-(log_pi + log_disc(2.0) + std::log(tail_beta)))
                      : kInf;
    sol.disc_size = std::exp(log_disc(2.0));
    sol.objective = sqrt_beta * (c1 + c2) + std::pow(static_cast<double>(t), -2.0);
    sol.fallback = true;
    return sol;
  }
};

}  // namespace detail

/// Minimize g(eta, alpha, s) = sqrt_eta c1 + sqrt_alpha c2 + t^{-s} subject
/// to the implicit tail equations, the budget delta (1 - 1/n_L), and
/// alpha <= beta. Coarse 64x64 log grid over (budget fraction, s) followed
/// by alternating golden-section passes, plus the classic split at s = 2 as
/// a candidate so the result never loses to the classic bound.
[[nodiscard]] inline SubproblemSolution solve_subproblem(
    std::int64_t t, double c1, double c2, double beta,
    const ProblemConstants& c) {
  c.validate();
  if (t < 1) throw std::invalid_argument("solve_subproblem: t must be >= 1");
  if (!std::isfinite(c1) || !(c1 >= 0.0)) {
    throw std::invalid_argument("solve_subproblem: c1 must be finite and >= 0");
  }
  if (!std::isfinite(c2) || !(c2 >= 0.0)) {
    throw std::invalid_argument("solve_subproblem: c2 must be finite and >= 0");
  }
  if (!std::isfinite(beta) || !(beta > 0.0)) {
    throw std::invalid_argument("solve_subproblem: beta must be positive");
  }

  const detail::SubproblemSearch ctx(c, t, c1, c2, beta);
  constexpr int N = detail::kGridN;

  std::array<double, N> fracs{}, svals{};
  const double lf_min = std::log(detail::kFracMin);
  const double ls_min = std::log(ctx.s_min);
  const double ls_max = std::log(detail::kSMax);
  for (int i = 0; i < N; ++i) {
    fracs[i] = std::exp(lf_min * (1.0 - static_cast<double>(i) / (N - 1)));
    svals[i] = std::exp(ls_min + (ls_max - ls_min) * i / (N - 1));
  }

  double best = detail::kInf;
  int bi = 0, bj = 0;
  for (int j = 0; j < N; ++j) {
    if (!(ctx.u_cap(svals[j]) > 0.0)) continue;
    for (int i = 0; i < N; ++i) {
      const double g = ctx.value(fracs[i], svals[j]);
      if (g < best) {
        best = g;
        bi = i;
        bj = j;
      }
    }
  }

  bool found = best < detail::kInf;
  double cf = 1.0, cs = 2.0, cg = detail::kInf;
  if (found) {
    cf = fracs[bi];
    cs = svals[bj];
    cg = best;
    double f_lo = fracs[std::max(0, bi - 1)];
    double f_hi = fracs[std::min(N - 1, bi + 1)];
    double s_lo = svals[std::max(0, bj - 1)];
    double s_hi = svals[std::min(N - 1, bj + 1)];
    for (int pass = 0; pass < 4; ++pass) {
      auto [xf, gf] = ucbstop::detail::golden_min(
          [&](double fr) { return ctx.value(fr, cs); }, f_lo, f_hi, 1e-10, 60);
      if (gf < cg) {
        cg = gf;
        cf = xf;
      }
      auto [xs, gs] = ucbstop::detail::golden_min(
          [&](double sv) { return ctx.value(cf, sv); }, s_lo, s_hi, 1e-10, 60);
      if (gs < cg) {
        cg = gs;
        cs = xs;
      }
      const double wf = (f_hi - f_lo) * 0.25;
      const double ws = (s_hi - s_lo) * 0.25;
      f_lo = std::max(detail::kFracMin, cf - wf);
      f_hi = std::min(1.0, cf + wf);
      s_lo = std::max(ctx.s_min, cs - ws);
      s_hi = std::min(detail::kSMax, cs + ws);
    }
  }

  if (ctx.u_cap(2.0) > 0.0) {
    const double g2 = ctx.value(1.0, 2.0);
    if (!found || g2 < cg) {
      found = true;
      cf = 1.0;
      cs = 2.0;
      cg = g2;
    }
  }

  if (!found) return ctx.classic_point();
  return ctx.finish(cf, cs, cg);
}

/// Tightened instantaneous-regret bound
///   (sqrt_beta + sqrt_eta) c1 - (sqrt_beta - sqrt_alpha) c2 + t^{-s},
/// clamped below at 0 since regret is nonnegative.
[[nodiscard]] inline double tightened_bound(std::int64_t t, double c1,
                                            double c2, double beta,
                                            const SubproblemSolution& sol) {
  const double sb = std::sqrt(beta);
  const double raw = (sb + sol.sqrt_eta) * c1 - (sb - sol.sqrt_alpha) * c2 +
                     std::pow(static_cast<double>(t), -sol.s);
  return std::max(0.0, raw);
}

struct ClassicBound {
  double full;
  double table_variant;
};

/// Classic instantaneous-regret bound 2 sqrt_beta c1 + 1/t^2; the table
/// variant drops the 1/t^2 term, matching the reporting convention of the
/// bound-comparison tables.
[[nodiscard]] inline ClassicBound classic_bound(std::int64_t t, double c1,
                                                double beta) {
  if (t < 1) throw std::invalid_argument("classic_bound: t must be >= 1");
  const double table = 2.0 * std::sqrt(beta) * c1;
  const double td = static_cast<double>(t);
  return {table + 1.0 / (td * td), table};
}

enum class Verdict { Continue, Stop };

struct BoundCertificate {
  std::int64_t t = 0;
  double c1 = 0.0;
  double c2 = 0.0;
  double beta = 0.0;
  SubproblemSolution solution;
  double tightened = 0.0;
  double classic_full = 0.0;
  double classic_table = 0.0;
  Verdict verdict = Verdict::Continue;
};

/// One full stop-test evaluation: solve the split, evaluate both bounds,
/// and compare against epsilon with a strict inequality.
[[nodiscard]] inline BoundCertificate make_certificate(
    std::int64_t t, double c1, const ProblemConstants& c, double epsilon) {
  if (!(epsilon > 0.0)) {
    throw ConfigError("make_certificate: epsilon must be positive");
  }
  BoundCertificate cert;
  cert.t = t;
  cert.c1 = c1;
  cert.beta = compute_beta(t, c);
  cert.c2 = variance_floor(t, c.sigma);
  cert.solution = solve_subproblem(t, c1, cert.c2, cert.beta, c);
  cert.tightened = tightened_bound(t, c1, cert.c2, cert.beta, cert.solution);
  const ClassicBound cb = classic_bound(t, c1, cert.beta);
  cert.classic_full = cb.full;
  cert.classic_table = cb.table_variant;
  cert.verdict = cert.tightened < epsilon ? Verdict::Stop : Verdict::Continue;
  return cert;
}

}  // namespace ucbstop::certify
