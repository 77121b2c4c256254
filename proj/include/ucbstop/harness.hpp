#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ucbstop/boloop.hpp"
#include "ucbstop/certify.hpp"
#include "ucbstop/objectives.hpp"

namespace ucbstop::harness {

namespace detail {

inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string g4(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Bound tables
// ---------------------------------------------------------------------------

/// Row plan for a bound-comparison table: for every t, c1 runs over the
/// posterior-deviation floor at (t, sigma) followed by the fixed extras.
struct TableSpec {
  certify::ProblemConstants consts;
  std::vector<std::int64_t> ts = {20, 100, 500};
  bool include_floor_c1 = true;
  std::vector<double> extra_c1 = {1e-2, 1e-1};
};

[[nodiscard]] inline TableSpec preset(const std::string& name) {
  TableSpec spec;
  spec.consts.sigma = 1e-2;
  spec.consts.r = 1.0;
  spec.consts.a = 1.0;
  spec.consts.b = 1.0;
  if (name == "table1") {
    spec.consts.d = 4;
    spec.consts.delta = 0.1;
    spec.consts.n_L = 4.0;
  } else if (name == "table4") {
    spec.consts.d = 2;
    spec.consts.delta = 0.1;
    spec.consts.n_L = 10.0;
  } else if (name == "table5") {
    spec.consts.d = 2;
    spec.consts.delta = 0.01;
    spec.consts.n_L = 4.0;
  } else if (name == "table6") {
    spec.consts.d = 6;
    spec.consts.delta = 0.01;
    spec.consts.n_L = 10.0;
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return spec;
}

struct TableRow {
  std::int64_t t = 0;
  double c1 = 0.0;
  double c2 = 0.0;
  double sqrt_beta = 0.0;
  double sqrt_eta = 0.0;
  double sqrt_alpha = 0.0;
  double s = 0.0;
  double n_eta = 0.0;
  double n_alpha = 0.0;
  double bound_new = 0.0;
  double bound_old = 0.0;
  double ratio = 0.0;
  bool error = false;
  std::string message;
};

[[nodiscard]] inline std::vector<TableRow> bounds_table(const TableSpec& spec) {
  spec.consts.validate();
  std::vector<TableRow> rows;
  for (std::int64_t t : spec.ts) {
    std::vector<double> c1s;
    if (spec.include_floor_c1) {
      c1s.push_back(certify::variance_floor(t, spec.consts.sigma));
    }
    c1s.insert(c1s.end(), spec.extra_c1.begin(), spec.extra_c1.end());
    for (double c1 : c1s) {
      TableRow row;
      row.t = t;
      row.c1 = c1;
      try {
        const auto cert = certify::make_certificate(t, c1, spec.consts, 1.0);
        row.c2 = cert.c2;
        row.sqrt_beta = std::sqrt(cert.beta);
        row.sqrt_eta = cert.solution.sqrt_eta;
        row.sqrt_alpha = cert.solution.sqrt_alpha;
        row.s = cert.solution.s;
        row.n_eta = cert.solution.n_eta;
        row.n_alpha = cert.solution.n_alpha;
        row.bound_new = cert.tightened;
        row.bound_old = cert.classic_table;
        row.ratio = row.bound_old > 0.0 ? row.bound_new / row.bound_old
                                        : std::numeric_limits<double>::quiet_NaN();
      } catch (const std::exception& e) {
        row.error = true;
        row.message = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

inline constexpr const char* kTableCsvHeader =
    "t,c1,c2,sqrt_beta,sqrt_eta,sqrt_alpha,s,n_eta,n_alpha,bound_new,"
    "bound_old,ratio";

inline void write_table_csv(std::ostream& os, const std::vector<TableRow>& rows) {
  os << kTableCsvHeader << '\n';
  for (const auto& r : rows) {
    if (r.error) {
      os << r.t << ',' << detail::g17(r.c1) << ",error: " << r.message << '\n';
      continue;
    }
    os << r.t << ',' << detail::g17(r.c1) << ',' << detail::g17(r.c2) << ','
       << detail::g17(r.sqrt_beta) << ',' << detail::g17(r.sqrt_eta) << ','
       << detail::g17(r.sqrt_alpha) << ',' << detail::g17(r.s) << ','
       << detail::g17(r.n_eta) << ',' << detail::g17(r.n_alpha) << ','
       << detail::g17(r.bound_new) << ',' << detail::g17(r.bound_old) << ','
       << detail::g17(r.ratio) << '\n';
  }
}

inline void write_table_text(std::ostream& os, const std::vector<TableRow>& rows) {
  char line[256];
  std::snprintf(line, sizeof line, "%5s %9s %9s %7s %7s %7s %6s %10s %12s %10s %10s %6s",
                "t", "c1", "c2", "sqrtB", "sqrtEta", "sqrtAlp", "s", "n_eta",
                "n_alpha", "new", "old", "ratio");
  os << line << '\n';
  for (const auto& r : rows) {
    if (r.error) {
      std::snprintf(line, sizeof line, "%5lld %9.3g  error: %s",
                    static_cast<long long>(r.t), r.c1, r.message.c_str());
      os << line << '\n';
      continue;
    }
    std::snprintf(line, sizeof line,
                  "%5lld %9.3g %9.3g %7.3f %7.3f %7.3f %6.3f %10.4g %12.4g "
                  "%10.4g %10.4g %6.3f",
                  static_cast<long long>(r.t), r.c1, r.c2, r.sqrt_beta,
                  r.sqrt_eta, r.sqrt_alpha, r.s, r.n_eta, r.n_alpha,
                  r.bound_new, r.bound_old, r.ratio);
    os << line << '\n';
  }
}

// ---------------------------------------------------------------------------
// Bench
// ---------------------------------------------------------------------------

struct ExperimentConfig {
  std::string objective = "rosenbrock4";
  std::uint64_t gp_seed = 1;
  double gp_lengthscale = 0.5;
  int gp_dim = 2;
  int gp_features = 2048;
  std::string kernel = "m52";
  double lengthscale = 0.5;
  std::string hyper = "map";
  double sigma = 1e-2;
  int budget_T = 96;
  int init_count = 5;
  std::vector<std::string> rules = {"ucb-br", "acq", "delta-cb", "no-stop",
                                    "oracle-r"};
  double epsilon = 0.1;
  double delta = 0.05;
  double calibration_B = 2.0;
  double a = 0.0;  // 0 means "use B"
  double b = 0.0;  // 0 means "use B"
  double r = 1.0;
  double n_L = 10.0;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  int stride = 1;
  bool raw_regret = false;
  int threads = 0;  // 0 means hardware concurrency
  std::string out_prefix = "bench";
};

[[nodiscard]] inline std::vector<std::uint64_t> make_seeds(int count,
                                                           std::uint64_t base) {
  if (count < 1) throw std::invalid_argument("make_seeds: count must be >= 1");
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) seeds[static_cast<std::size_t>(i)] = base + static_cast<std::uint64_t>(i);
  return seeds;
}

[[nodiscard]] inline boloop::RuleKind parse_rule(const std::string& name) {
  if (name == "ucb-br") return boloop::RuleKind::UcbBr;
  if (name == "acq") return boloop::RuleKind::Acq;
  if (name == "delta-cb") return boloop::RuleKind::DeltaCb;
  if (name == "no-stop") return boloop::RuleKind::NoStop;
  if (name == "oracle-r") return boloop::RuleKind::OracleR;
  throw std::invalid_argument("unknown rule: " + name);
}

[[nodiscard]] inline objectives::Objective make_objective(
    const ExperimentConfig& cfg) {
  objectives::Objective o;
  if (cfg.objective == "branin") {
    o = objectives::make_branin();
  } else if (cfg.objective == "rosenbrock4") {
    o = objectives::make_rosenbrock4();
  } else if (cfg.objective == "levy4") {
    o = objectives::make_levy4();
  } else if (cfg.objective == "gp-se" || cfg.objective == "gp-m52") {
    const gp::KernelFamily family = cfg.objective == "gp-se"
                                        ? gp::KernelFamily::SquaredExponential
                                        : gp::KernelFamily::Matern52;
    o = objectives::gp_sample_objective({family, cfg.gp_lengthscale},
                                        cfg.gp_dim, cfg.gp_seed,
                                        cfg.gp_features);
  } else {
    throw std::invalid_argument("unknown objective: " + cfg.objective);
  }
  if (cfg.raw_regret) o.regret_scale = 1.0;
  return o;
}

[[nodiscard]] inline gp::KernelSpec make_kernel(const ExperimentConfig& cfg) {
  if (cfg.kernel == "se") {
    return {gp::KernelFamily::SquaredExponential, cfg.lengthscale};
  }
  if (cfg.kernel == "m52") return {gp::KernelFamily::Matern52, cfg.lengthscale};
  throw std::invalid_argument("unknown kernel: " + cfg.kernel);
}

[[nodiscard]] inline certify::ProblemConstants make_constants(
    const ExperimentConfig& cfg, int dim) {
  certify::ProblemConstants c;
  c.d = dim;
  c.r = cfg.r;
  c.a = cfg.a > 0.0 ? cfg.a : cfg.calibration_B;
  c.b = cfg.b > 0.0 ? cfg.b : cfg.calibration_B;
  c.sigma = cfg.sigma;
  c.delta = cfg.delta;
  c.n_L = cfg.n_L;
  c.validate();
  return c;
}

struct RunSummary {
  std::string rule;
  std::uint64_t seed = 0;
  int stop_iteration = 0;
  int iterations_used = 0;
  bool success = false;
  double final_regret = 0.0;
  double mean_stoptest_ms = 0.0;
  double mean_loop_ms = 0.0;
  bool failed = false;
  std::string error;
};

struct RuleSummary {
  std::string rule;
  int runs = 0;
  int failures = 0;
  double mean_stop_iteration = 0.0;
  double success_rate = 0.0;
  double mean_final_regret = 0.0;
  double mean_stoptest_ms = 0.0;
  double mean_loop_ms = 0.0;
};

struct BenchResult {
  std::vector<boloop::RunRecord> records;  // successful runs, (rule, seed) order
  std::vector<RunSummary> run_rows;        // every attempt, (rule, seed) order
  std::vector<RuleSummary> summaries;      // one per configured rule
};

namespace detail {

inline RunSummary summarize_run(const std::string& rule,
                                const boloop::RunRecord& rec) {
  RunSummary s;
  s.rule = rule;
  s.seed = rec.seed;
  s.stop_iteration = rec.stop_iteration;
  s.iterations_used = rec.iterations_used;
  s.success = rec.success;
  s.final_regret =
      rec.regret_curve[static_cast<std::size_t>(rec.stop_iteration) - 1];
  double test_total = 0.0, loop_total = 0.0;
  int tests = 0, loops = 0;
  for (const auto& it : rec.iters) {
    if (it.tested) {
      test_total += it.stoptest_ms;
      ++tests;
    }
    if (it.t > rec.init_count) {
      loop_total += it.loop_ms;
      ++loops;
    }
  }
  s.mean_stoptest_ms = tests > 0 ? test_total / tests : 0.0;
  s.mean_loop_ms = loops > 0 ? loop_total / loops : 0.0;
  return s;
}

}  // namespace detail

/// Runs every configured rule over every seed on a bounded worker pool.
/// Results are placed by job index, so the output order is (rule, seed)
/// regardless of scheduling; failed runs are logged and excluded from means.
[[nodiscard]] inline BenchResult run_bench(const ExperimentConfig& cfg) {
  if (cfg.seeds.empty()) {
    throw std::invalid_argument("run_bench: need at least one seed");
  }
  {
    auto sorted = cfg.seeds;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("run_bench: seeds must be unique");
    }
  }
  if (cfg.budget_T < cfg.init_count || cfg.init_count < 1) {
    throw std::invalid_argument("run_bench: need T >= init_count >= 1");
  }
  if (cfg.rules.empty()) {
    throw std::invalid_argument("run_bench: need at least one rule");
  }
  if (cfg.r != 1.0) {
    throw std::invalid_argument(
        "run_bench: objectives live on the unit cube, so r must be 1");
  }
  for (const auto& name : cfg.rules) (void)parse_rule(name);

  const objectives::Objective objective = make_objective(cfg);
  const gp::KernelSpec kernel = make_kernel(cfg);
  const certify::ProblemConstants consts = make_constants(cfg, objective.dim);
  const acquire::Box domain{objective.dim, 1.0};
  const double noise_var = cfg.sigma * cfg.sigma;

  boloop::RunOptions opts;
  if (cfg.hyper == "map") {
    opts.hyper = boloop::HyperMode::Map;
  } else if (cfg.hyper == "fixed") {
    opts.hyper = boloop::HyperMode::Fixed;
  } else {
    throw std::invalid_argument("unknown hyper mode: " + cfg.hyper);
  }

  struct Job {
    std::string rule_name;
    boloop::StoppingRuleConfig rule;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const auto& rule_name : cfg.rules) {
    boloop::StoppingRuleConfig rule;
    rule.kind = parse_rule(rule_name);
    rule.epsilon = cfg.epsilon;
    rule.check_stride = cfg.stride;
    for (std::uint64_t seed : cfg.seeds) jobs.push_back({rule_name, rule, seed});
  }

  struct Slot {
    boloop::RunRecord record;
    bool ok = false;
    std::string error;
  };
  std::vector<Slot> slots(jobs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        slots[i].record =
            boloop::run_bo(objective, domain, kernel, noise_var, cfg.budget_T,
                           cfg.init_count, jobs[i].rule, consts, jobs[i].seed,
                           opts);
        if (slots[i].record.aborted) {
          slots[i].error = slots[i].record.abort_reason;
        } else {
          slots[i].ok = true;
        }
      } catch (const std::exception& e) {
        slots[i].error = e.what();
      }
    }
  };
  unsigned pool = cfg.threads > 0
                      ? static_cast<unsigned>(cfg.threads)
                      : std::max(1u, std::thread::hardware_concurrency());
  pool = std::min<unsigned>(pool, static_cast<unsigned>(jobs.size()));
  if (pool <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (unsigned i = 0; i < pool; ++i) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
  }

  BenchResult result;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (slots[i].ok) {
      result.run_rows.push_back(
          detail::summarize_run(jobs[i].rule_name, slots[i].record));
      result.records.push_back(std::move(slots[i].record));
    } else {
      RunSummary s;
      s.rule = jobs[i].rule_name;
      s.seed = jobs[i].seed;
      s.failed = true;
      s.error = slots[i].error;
      result.run_rows.push_back(std::move(s));
    }
  }

  for (const auto& rule_name : cfg.rules) {
    RuleSummary rs;
    rs.rule = rule_name;
    double stop_sum = 0.0, regret_sum = 0.0, test_sum = 0.0, loop_sum = 0.0;
    int good = 0, wins = 0;
    for (const auto& row : result.run_rows) {
      if (row.rule != rule_name) continue;
      if (row.failed) {
        ++rs.failures;
        continue;
      }
      ++good;
      stop_sum += row.stop_iteration;
      regret_sum += row.final_regret;
      test_sum += row.mean_stoptest_ms;
      loop_sum += row.mean_loop_ms;
      if (row.success) ++wins;
    }
    rs.runs = good;
    if (good > 0) {
      rs.mean_stop_iteration = stop_sum / good;
      rs.success_rate = static_cast<double>(wins) / good;
      rs.mean_final_regret = regret_sum / good;
      rs.mean_stoptest_ms = test_sum / good;
      rs.mean_loop_ms = loop_sum / good;
    }
    result.summaries.push_back(std::move(rs));
  }
  return result;
}

// ---------------------------------------------------------------------------
// CSV emission
// ---------------------------------------------------------------------------

inline constexpr const char* kIterationCsvHeader =
    "seed,t,x,y,c1,beta,sqrt_eta,sqrt_alpha,s,bound_new,bound_old_full,"
    "bound_old_table,verdict,stoptest_ms";

/// Per-iteration audit rows for one rule's records. Every column except
/// stoptest_ms is reproducible bit-for-bit across reruns.
inline void write_iterations_csv(std::ostream& os,
                                 const std::vector<const boloop::RunRecord*>& recs) {
  os << kIterationCsvHeader << '\n';
  for (const auto* rec : recs) {
    for (const auto& it : rec->iters) {
      os << rec->seed << ',' << it.t << ',';
      for (int j = 0; j < it.x.size(); ++j) {
        if (j > 0) os << ';';
        os << detail::g17(it.x[j]);
      }
      os << ',' << detail::g17(it.y) << ',' << detail::g17(it.c1) << ','
         << detail::g17(it.beta) << ',' << detail::g17(it.sqrt_eta) << ','
         << detail::g17(it.sqrt_alpha) << ',' << detail::g17(it.s) << ','
         << detail::g17(it.bound_new) << ',' << detail::g17(it.bound_old_full)
         << ',' << detail::g17(it.bound_old_table) << ','
         << (it.tested ? (it.stop ? "stop" : "continue") : "") << ','
         << detail::g17(it.stoptest_ms) << '\n';
    }
  }
}

inline constexpr const char* kRunCsvHeader =
    "rule,seed,stop_iteration,iterations_used,success,final_regret,"
    "mean_stoptest_ms,mean_loop_ms,failed,error";

inline void write_runs_csv(std::ostream& os,
                           const std::vector<RunSummary>& rows) {
  os << kRunCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.rule << ',' << r.seed << ',' << r.stop_iteration << ','
       << r.iterations_used << ',' << (r.success ? 1 : 0) << ','
       << detail::g17(r.final_regret) << ',' << detail::g17(r.mean_stoptest_ms)
       << ',' << detail::g17(r.mean_loop_ms) << ',' << (r.failed ? 1 : 0)
       << ',' << r.error << '\n';
  }
}

inline constexpr const char* kSummaryCsvHeader =
    "rule,runs,failures,mean_stop_iteration,success_rate,mean_final_regret,"
    "mean_stoptest_ms,mean_loop_ms";

inline void write_summary_csv(std::ostream& os,
                              const std::vector<RuleSummary>& rows) {
  os << kSummaryCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.rule << ',' << r.runs << ',' << r.failures << ','
       << detail::g17(r.mean_stop_iteration) << ','
       << detail::g17(r.success_rate) << ','
       << detail::g17(r.mean_final_regret) << ','
       << detail::g17(r.mean_stoptest_ms) << ','
       << detail::g17(r.mean_loop_ms) << '\n';
  }
}

inline void write_summary_text(std::ostream& os,
                               const std::vector<RuleSummary>& rows) {
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %5s %9s %10s %9s %13s %13s %11s",
                "rule", "runs", "failures", "stop-iter", "success",
                "final-regret", "stoptest-ms", "loop-ms");
  os << line << '\n';
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line,
                  "%-10s %5d %9d %10.2f %8.0f%% %13.4g %13.4g %11.4g",
                  r.rule.c_str(), r.runs, r.failures, r.mean_stop_iteration,
                  100.0 * r.success_rate, r.mean_final_regret,
                  r.mean_stoptest_ms, r.mean_loop_ms);
    os << line << '\n';
  }
}

// ---------------------------------------------------------------------------
// Stop-test overhead
// ---------------------------------------------------------------------------

struct OverheadRow {
  std::string rule;
  double mean_stoptest_ms = 0.0;
  double mean_loop_ms = 0.0;
  double share = 0.0;  // stoptest / (stoptest + loop)
};

[[nodiscard]] inline std::vector<OverheadRow> time_overhead(
    const BenchResult& bench) {
  std::vector<OverheadRow> rows;
  for (const auto& s : bench.summaries) {
    OverheadRow row;
    row.rule = s.rule;
    row.mean_stoptest_ms = s.mean_stoptest_ms;
    row.mean_loop_ms = s.mean_loop_ms;
    const double total = s.mean_stoptest_ms + s.mean_loop_ms;
    row.share = total > 0.0 ? s.mean_stoptest_ms / total : 0.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

inline constexpr const char* kOverheadCsvHeader =
    "rule,mean_stoptest_ms,mean_loop_ms,share";

inline void write_overhead_csv(std::ostream& os,
                               const std::vector<OverheadRow>& rows) {
  os << kOverheadCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.rule << ',' << detail::g17(r.mean_stoptest_ms) << ','
       << detail::g17(r.mean_loop_ms) << ',' << detail::g17(r.share) << '\n';
  }
}

}  // namespace ucbstop::harness
