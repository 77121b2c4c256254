#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ucbstop/acquire.hpp"
#include "ucbstop/certify.hpp"
#include "ucbstop/gp.hpp"
#include "ucbstop/objectives.hpp"
#include "ucbstop/sobol.hpp"

namespace ucbstop::boloop {

enum class RuleKind { UcbBr, Acq, DeltaCb, NoStop, OracleR };

[[nodiscard]] inline const char* rule_name(RuleKind k) {
  switch (k) {
    case RuleKind::UcbBr: return "ucb-br";
    case RuleKind::Acq: return "acq";
    case RuleKind::DeltaCb: return "delta-cb";
    case RuleKind::NoStop: return "no-stop";
    case RuleKind::OracleR: return "oracle-r";
  }
  return "?";
}

/// threshold applies to the Acq / DeltaCb gap statistics and defaults to
/// epsilon when left as NaN.
struct StoppingRuleConfig {
  RuleKind kind = RuleKind::UcbBr;
  double epsilon = 0.1;
  int check_stride = 1;
  double threshold = std::numeric_limits<double>::quiet_NaN();

  [[nodiscard]] double gap_threshold() const {
    return std::isnan(threshold) ? epsilon : threshold;
  }
};

enum class HyperMode { Fixed, Map };

struct RunOptions {
  HyperMode hyper = HyperMode::Fixed;
  int probe_count = 1024;
  int top_k = 16;
  int refine_evals = 200;
};

/// One sample of the loop. Bound and certificate fields are NaN on
/// initialization samples and on iterations where no stop test ran.
struct IterationRecord {
  int t = 0;
  Eigen::VectorXd x;
  double y = 0.0;
  double c1 = std::numeric_limits<double>::quiet_NaN();
  double beta = std::numeric_limits<double>::quiet_NaN();
  double sqrt_eta = std::numeric_limits<double>::quiet_NaN();
  double sqrt_alpha = std::numeric_limits<double>::quiet_NaN();
  double s = std::numeric_limits<double>::quiet_NaN();
  double bound_new = std::numeric_limits<double>::quiet_NaN();
  double bound_old_full = std::numeric_limits<double>::quiet_NaN();
  double bound_old_table = std::numeric_limits<double>::quiet_NaN();
  bool tested = false;
  bool stop = false;
  double stoptest_ms = 0.0;
  double loop_ms = 0.0;
};

struct RunRecord {
  std::uint64_t seed = 0;
  std::string objective_id;
  RuleKind rule = RuleKind::NoStop;
  gp::KernelSpec kernel;
  double epsilon = 0.0;
  int budget_T = 0;
  int init_count = 0;
  int iterations_used = 0;
  int stop_iteration = 0;
  std::vector<IterationRecord> iters;
  std::vector<double> regret_curve;
  std::vector<double> lengthscale_trace;
  bool success = false;
  bool aborted = false;
  std::string abort_reason;
};

struct GapVerdict {
  double gap = 0.0;
  bool stop = false;
};

/// First 1-based index with curve[t-1] <= epsilon, else the curve length.
[[nodiscard]] inline int oracle_r_stop(const std::vector<double>& regret_curve,
                                       double epsilon) {
  if (regret_curve.empty()) {
    throw std::invalid_argument("oracle_r_stop: empty regret curve");
  }
  for (std::size_t i = 0; i < regret_curve.size(); ++i) {
    if (regret_curve[i] <= epsilon) return static_cast<int>(i) + 1;
  }
  return static_cast<int>(regret_curve.size());
}

/// Acquisition-gap rule: stop when max_x UCB(x) - max_i mu(x_i) <= threshold.
[[nodiscard]] inline GapVerdict acq_stop(const gp::GpPosterior& g, double beta,
                                         double incumbent_mean_best,
                                         const acquire::Box& domain,
                                         double threshold,
                                         std::uint64_t probe_seed = 0) {
  acquire::AcquisitionQuery q;
  q.beta = beta;
  q.domain = domain;
  const auto best = maximize_acquisition(g, q, probe_seed);
  GapVerdict v;
  v.gap = best.value - incumbent_mean_best;
  v.stop = v.gap <= threshold;
  return v;
}

/// Confidence-band gap rule: stop when
/// max_x UCB(x) - max_i LCB(x_i) <= threshold, with LCB = mu - sqrt(beta) sigma.
[[nodiscard]] inline GapVerdict cb_gap_stop(
    const gp::GpPosterior& g, double beta, const acquire::Box& domain,
    const std::vector<Eigen::VectorXd>& observed, double threshold,
    std::uint64_t probe_seed = 0) {
  if (observed.empty()) {
    throw std::invalid_argument("cb_gap_stop: need at least one observation");
  }
  acquire::AcquisitionQuery q;
  q.beta = beta;
  q.domain = domain;
  const auto best = maximize_acquisition(g, q, probe_seed);
  double lcb_best = -std::numeric_limits<double>::infinity();
  for (const auto& x : observed) {
    const auto [mean, var] = g.posterior(x);
    lcb_best = std::max(lcb_best, mean - std::sqrt(beta) * std::sqrt(var));
  }
  GapVerdict v;
  v.gap = best.value - lcb_best;
  v.stop = v.gap <= threshold;
  return v;
}

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Algorithm: Sobol initialization, then UCB acquisition / observe / refit,
/// with the stopping rule evaluated after the refit on the configured stride.
/// Iteration index t counts samples, so t = init_count + 1 is the first
/// acquired point. The rule evaluation never touches the noise stream, so two
/// rules with the same seed share a bit-identical query prefix.
inline RunRecord run_bo(const objectives::Objective& objective,
                        const acquire::Box& domain,
                        const gp::KernelSpec& kernel, double noise_var,
                        int budget_T, int init_count,
                        const StoppingRuleConfig& rule,
                        const certify::ProblemConstants& consts,
                        std::uint64_t seed, const RunOptions& opts = {}) {
  if (init_count < 1 || budget_T < init_count) {
    throw std::invalid_argument("run_bo: need budget_T >= init_count >= 1");
  }
  if (!(rule.epsilon > 0.0) || rule.check_stride < 1) {
    throw std::invalid_argument("run_bo: invalid stopping rule");
  }
  if (objective.dim != domain.dim || consts.d != domain.dim) {
    throw std::invalid_argument("run_bo: dimension mismatch");
  }
  if (consts.r != domain.edge) {
    throw std::invalid_argument("run_bo: domain scale disagrees with constants");
  }
  if (std::abs(std::sqrt(noise_var) - consts.sigma) >
      1e-9 * std::max(1.0, consts.sigma)) {
    throw std::invalid_argument("run_bo: noise level disagrees with constants");
  }
  consts.validate();

  RunRecord rec;
  rec.seed = seed;
  rec.objective_id = objective.id;
  rec.rule = rule.kind;
  rec.kernel = kernel;
  rec.epsilon = rule.epsilon;
  rec.budget_T = budget_T;
  rec.init_count = init_count;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, std::sqrt(noise_var));

  std::vector<Eigen::VectorXd> xs;
  std::vector<double> ys;
  double best_f = -std::numeric_limits<double>::infinity();

  const auto observe = [&](Eigen::VectorXd x, int t, double c1) {
    const double f_val = objective.f(x);
    IterationRecord it;
    it.t = t;
    it.x = x;
    it.c1 = c1;
    if (!std::isfinite(f_val)) {
      rec.aborted = true;
      rec.abort_reason = "objective returned a non-finite value at iteration " +
                         std::to_string(t);
      rec.iters.push_back(std::move(it));
      return false;
    }
    it.y = f_val + noise(rng);
    xs.push_back(std::move(x));
    ys.push_back(it.y);
    best_f = std::max(best_f, f_val);
    rec.regret_curve.push_back((objective.f_star - best_f) /
                               objective.regret_scale);
    rec.iters.push_back(std::move(it));
    return true;
  };

  const auto refit = [&]() {
    gp::KernelSpec spec = kernel;
    if (opts.hyper == HyperMode::Map) {
      spec = gp::fit_hyperparams(xs, ys, kernel.family, noise_var);
    }
    rec.lengthscale_trace.push_back(spec.lengthscale);
    return gp::GpPosterior::fit(xs, ys, spec, noise_var);
  };

  qmc::Sobol init_points(domain.dim, seed);
  for (int t = 1; t <= init_count; ++t) {
    const auto p = init_points.next();
    Eigen::VectorXd x(domain.dim);
    for (int j = 0; j < domain.dim; ++j) x[j] = p[static_cast<std::size_t>(j)] * domain.edge;
    if (!observe(std::move(x), t, std::numeric_limits<double>::quiet_NaN())) {
      rec.iterations_used = t;
      rec.stop_iteration = t;
      return rec;
    }
  }
  gp::GpPosterior posterior = refit();

  int stopped_at = 0;
  for (int t = init_count + 1; t <= budget_T && stopped_at == 0; ++t) {
    const auto loop_start = std::chrono::steady_clock::now();
    const double beta = certify::compute_beta(t, consts);
    acquire::AcquisitionQuery q;
    q.beta = beta;
    q.domain = domain;
    q.probe_count = opts.probe_count;
    q.top_k = opts.top_k;
    q.refine_evals = opts.refine_evals;
    const auto acq = maximize_acquisition(posterior, q, detail::mix_seed(seed, static_cast<std::uint64_t>(t)));

    if (!observe(acq.x, t, acq.sigma)) {
      rec.iterations_used = t;
      rec.stop_iteration = t;
      return rec;
    }
    posterior = refit();

    IterationRecord& it = rec.iters.back();
    it.beta = beta;
    it.loop_ms = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - loop_start)
                     .count();
    const bool due = (t - init_count - 1) % rule.check_stride == 0;
    if (!due || rule.kind == RuleKind::NoStop || rule.kind == RuleKind::OracleR) {
      continue;
    }
    it.tested = true;
    const auto t0 = std::chrono::steady_clock::now();
    switch (rule.kind) {
      case RuleKind::UcbBr: {
        const auto cert =
            certify::make_certificate(t, acq.sigma, consts, rule.epsilon);
        it.sqrt_eta = cert.solution.sqrt_eta;
        it.sqrt_alpha = cert.solution.sqrt_alpha;
        it.s = cert.solution.s;
        it.bound_new = cert.tightened;
        it.bound_old_full = cert.classic_full;
        it.bound_old_table = cert.classic_table;
        it.stop = cert.verdict == certify::Verdict::Stop;
        break;
      }
      case RuleKind::Acq: {
        double mean_best = -std::numeric_limits<double>::infinity();
        for (const auto& x : xs) {
          mean_best = std::max(mean_best, posterior.posterior(x).first);
        }
        const auto v = acq_stop(posterior, beta, mean_best, domain,
                                rule.gap_threshold(),
                                detail::mix_seed(~seed, static_cast<std::uint64_t>(t)));
        it.bound_new = v.gap;
        it.stop = v.stop;
        break;
      }
      case RuleKind::DeltaCb: {
        const auto v = cb_gap_stop(posterior, beta, domain, xs,
                                   rule.gap_threshold(),
                                   detail::mix_seed(~seed, static_cast<std::uint64_t>(t)));
        it.bound_new = v.gap;
        it.stop = v.stop;
        break;
      }
      default:
        break;
    }
    it.stoptest_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    if (it.stop) stopped_at = t;
  }

  rec.iterations_used = static_cast<int>(rec.iters.size());
  rec.stop_iteration = stopped_at != 0 ? stopped_at : budget_T;
  if (rule.kind == RuleKind::OracleR) {
    rec.stop_iteration = oracle_r_stop(rec.regret_curve, rule.epsilon);
  }
  rec.success =
      rec.regret_curve[static_cast<std::size_t>(rec.stop_iteration) - 1] <=
      rule.epsilon;
  return rec;
}

}  // namespace ucbstop::boloop
