#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ucbstop/harness.hpp"

namespace harness = ucbstop::harness;

namespace {

struct BenchFlags {
  harness::ExperimentConfig cfg;
  int seed_count = 10;
  std::uint64_t seed_base = 1;
  std::vector<std::uint64_t> seed_list;
  bool ablation = false;
  bool json = false;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  return os;
}

int run_bounds_table(const harness::TableSpec& spec,
                     const std::string& csv_path) {
  const auto rows = harness::bounds_table(spec);
  harness::write_table_text(std::cout, rows);
  if (!csv_path.empty()) {
    auto os = open_out(csv_path);
    harness::write_table_csv(os, rows);
    std::cout << "wrote " << csv_path << "\n";
  }
  for (const auto& r : rows) {
    if (r.error) return 3;
  }
  return 0;
}

void resolve_seeds(BenchFlags& flags) {
  if (!flags.seed_list.empty()) {
    flags.cfg.seeds = flags.seed_list;
  } else {
    flags.cfg.seeds = harness::make_seeds(flags.seed_count, flags.seed_base);
  }
}

void write_bench_outputs(const harness::ExperimentConfig& cfg,
                         const harness::BenchResult& result, bool json) {
  {
    auto os = open_out(cfg.out_prefix + "-runs.csv");
    harness::write_runs_csv(os, result.run_rows);
  }
  {
    auto os = open_out(cfg.out_prefix + "-summary.csv");
    harness::write_summary_csv(os, result.summaries);
  }
  for (const auto& rule : cfg.rules) {
    std::vector<const ucbstop::boloop::RunRecord*> recs;
    for (const auto& rec : result.records) {
      if (ucbstop::boloop::rule_name(rec.rule) == rule) recs.push_back(&rec);
    }
    auto os = open_out(cfg.out_prefix + "-iters-" + rule + ".csv");
    harness::write_iterations_csv(os, recs);
  }
  if (json) {
    nlohmann::json doc;
    doc["objective"] = cfg.objective;
    doc["kernel"] = cfg.kernel;
    doc["epsilon"] = cfg.epsilon;
    doc["delta"] = cfg.delta;
    doc["budget"] = cfg.budget_T;
    doc["seeds"] = cfg.seeds;
    doc["rules"] = nlohmann::json::array();
    for (const auto& s : result.summaries) {
      doc["rules"].push_back({{"rule", s.rule},
                              {"runs", s.runs},
                              {"failures", s.failures},
                              {"mean_stop_iteration", s.mean_stop_iteration},
                              {"success_rate", s.success_rate},
                              {"mean_final_regret", s.mean_final_regret},
                              {"mean_stoptest_ms", s.mean_stoptest_ms},
                              {"mean_loop_ms", s.mean_loop_ms}});
    }
    auto os = open_out(cfg.out_prefix + "-summary.json");
    os << doc.dump(2) << '\n';
  }
  harness::write_summary_text(std::cout, result.summaries);
  std::cout << "wrote " << cfg.out_prefix << "-runs.csv, " << cfg.out_prefix
            << "-summary.csv and per-rule iteration CSVs\n";
}

int run_bench_cmd(BenchFlags& flags) {
  resolve_seeds(flags);
  if (!flags.ablation) {
    const auto result = harness::run_bench(flags.cfg);
    write_bench_outputs(flags.cfg, result, flags.json);
    return 0;
  }

  const std::vector<double> bs = {1.0, 2.0, 5.0};
  const std::vector<double> deltas = {0.01, 0.05, 0.2};
  auto os = open_out(flags.cfg.out_prefix + "-ablation.csv");
  os << "B,delta," << harness::kSummaryCsvHeader << '\n';
  for (double B : bs) {
    for (double delta : deltas) {
      harness::ExperimentConfig cell = flags.cfg;
      cell.calibration_B = B;
      cell.a = 0.0;
      cell.b = 0.0;
      cell.delta = delta;
      std::cout << "B=" << B << " delta=" << delta << '\n';
      const auto result = harness::run_bench(cell);
      harness::write_summary_text(std::cout, result.summaries);
      for (const auto& s : result.summaries) {
        os << harness::detail::g17(B) << ',' << harness::detail::g17(delta)
           << ',' << s.rule << ',' << s.runs << ',' << s.failures << ','
           << harness::detail::g17(s.mean_stop_iteration) << ','
           << harness::detail::g17(s.success_rate) << ','
           << harness::detail::g17(s.mean_final_regret) << ','
           << harness::detail::g17(s.mean_stoptest_ms) << ','
           << harness::detail::g17(s.mean_loop_ms) << '\n';
      }
    }
  }
  std::cout << "wrote " << flags.cfg.out_prefix << "-ablation.csv\n";
  return 0;
}

int run_overhead_cmd(BenchFlags& flags, const std::string& out_override) {
  resolve_seeds(flags);
  if (!out_override.empty()) flags.cfg.out_prefix = out_override;
  const auto result = harness::run_bench(flags.cfg);
  const auto rows = harness::time_overhead(result);
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %14s %12s %8s", "rule",
                "stoptest-ms", "loop-ms", "share");
  std::cout << line << '\n';
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-10s %14.4g %12.4g %8.4f",
                  r.rule.c_str(), r.mean_stoptest_ms, r.mean_loop_ms, r.share);
    std::cout << line << '\n';
  }
  auto os = open_out(flags.cfg.out_prefix + "-overhead.csv");
  harness::write_overhead_csv(os, rows);
  std::cout << "wrote " << flags.cfg.out_prefix << "-overhead.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GP-UCB early-stopping toolkit: bound tables, stopping-rule "
               "benchmarks, and stop-test timing"};
  app.set_config("--config", "", "key-value config file; [bench] section "
                                 "holds experiment settings");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  auto* table_cmd = app.add_subcommand(
      "bounds-table", "reproduce regret-bound comparison tables");
  table_cmd->fallthrough();
  std::string preset_name;
  std::vector<std::int64_t> custom_ts;
  std::vector<double> custom_c1s;
  bool floor_c1 = false;
  std::string csv_path;
  harness::TableSpec overrides;  // holds constant override values
  table_cmd->add_option("--preset", preset_name, "table1|table4|table5|table6")
      ->check(CLI::IsMember({"table1", "table4", "table5", "table6"}));
  table_cmd->add_option("--t", custom_ts,
                        "iteration counts (default 20 100 500)");
  table_cmd->add_option("--c1", custom_c1s,
                        "posterior-deviation values; replaces the default "
                        "floor + {1e-2, 1e-1} list");
  table_cmd->add_flag("--floor-c1", floor_c1,
                      "include the variance floor at (t, sigma) per t even "
                      "with an explicit --c1 list");
  table_cmd->add_option("--csv", csv_path, "also write rows to this file");
  auto* opt_d = table_cmd->add_option("--d", overrides.consts.d, "dimension");
  auto* opt_delta =
      table_cmd->add_option("--delta", overrides.consts.delta, "failure mass");
  auto* opt_nl =
      table_cmd->add_option("--n-l", overrides.consts.n_L, "Lipschitz splits");
  auto* opt_sigma =
      table_cmd->add_option("--sigma", overrides.consts.sigma, "noise level");
  auto* opt_a = table_cmd->add_option("--a", overrides.consts.a,
                                      "Lipschitz tail constant a");
  auto* opt_b = table_cmd->add_option("--b", overrides.consts.b,
                                      "Lipschitz tail constant b");
  auto* opt_r =
      table_cmd->add_option("--r", overrides.consts.r, "domain edge length");
  auto* opt_eps_b = table_cmd->add_option("--eps-b", overrides.consts.eps_b,
                                          "width lower clamp");

  BenchFlags bf;
  auto* bench_cmd =
      app.add_subcommand("bench", "run multi-seed stopping-rule benchmarks");
  bench_cmd->fallthrough();
  bench_cmd
      ->add_option("--objective", bf.cfg.objective,
                   "branin|rosenbrock4|levy4|gp-se|gp-m52")
      ->check(CLI::IsMember(
          {"branin", "rosenbrock4", "levy4", "gp-se", "gp-m52"}));
  bench_cmd->add_option("--gp-seed", bf.cfg.gp_seed,
                        "generation seed for gp-* objectives");
  bench_cmd->add_option("--gp-lengthscale", bf.cfg.gp_lengthscale,
                        "lengthscale for gp-* objectives");
  bench_cmd->add_option("--gp-dim", bf.cfg.gp_dim,
                        "dimension for gp-* objectives");
  bench_cmd->add_option("--gp-features", bf.cfg.gp_features,
                        "random feature count for gp-* objectives");
  bench_cmd->add_option("--kernel", bf.cfg.kernel, "se|m52")
      ->check(CLI::IsMember({"se", "m52"}));
  bench_cmd->add_option("--lengthscale", bf.cfg.lengthscale,
                        "surrogate lengthscale (fixed mode / map start)");
  bench_cmd->add_option("--hyper", bf.cfg.hyper, "fixed|map")
      ->check(CLI::IsMember({"fixed", "map"}));
  bench_cmd->add_option("--sigma", bf.cfg.sigma, "noise level");
  bench_cmd->add_option("--budget,-T", bf.cfg.budget_T, "iteration budget T");
  bench_cmd->add_option("--init", bf.cfg.init_count,
                        "quasi-random initial design size");
  bench_cmd
      ->add_option("--rules", bf.cfg.rules,
                   "subset of ucb-br acq delta-cb no-stop oracle-r")
      ->check(CLI::IsMember(
          {"ucb-br", "acq", "delta-cb", "no-stop", "oracle-r"}));
  bench_cmd->add_option("--epsilon", bf.cfg.epsilon, "target regret");
  bench_cmd->add_option("--delta", bf.cfg.delta, "failure mass");
  bench_cmd->add_option("--calibration-b,-B", bf.cfg.calibration_B,
                        "sets a = b = B unless --a/--b given");
  bench_cmd->add_option("--a", bf.cfg.a, "override tail constant a");
  bench_cmd->add_option("--b", bf.cfg.b, "override tail constant b");
  bench_cmd->add_option("--r", bf.cfg.r, "domain edge (must stay 1)");
  bench_cmd->add_option("--n-l", bf.cfg.n_L, "Lipschitz splits");
  bench_cmd->add_option("--seeds", bf.seed_count, "number of seeds");
  bench_cmd->add_option("--seed-base", bf.seed_base, "first seed value");
  bench_cmd->add_option("--seed-list", bf.seed_list,
                        "explicit seed list (overrides --seeds/--seed-base)");
  bench_cmd->add_option("--stride", bf.cfg.stride, "stop-test stride");
  bench_cmd->add_flag("--raw-regret", bf.cfg.raw_regret,
                      "report regret in raw objective units");
  bench_cmd->add_option("--threads", bf.cfg.threads,
                        "worker pool size (0 = hardware)");
  bench_cmd->add_option("--out", bf.cfg.out_prefix, "output file prefix");
  bench_cmd->add_flag("--ablation", bf.ablation,
                      "sweep B in {1,2,5} x delta in {0.01,0.05,0.2}");
  bench_cmd->add_flag("--json", bf.json, "also write <out>-summary.json");

  std::string overhead_out;
  auto* overhead_cmd = app.add_subcommand(
      "time-overhead", "measure per-rule stop-test wall time");
  overhead_cmd->fallthrough();
  overhead_cmd->add_option("--out", overhead_out, "output file prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (app.got_subcommand(table_cmd)) {
      harness::TableSpec spec;
      if (!preset_name.empty()) spec = harness::preset(preset_name);
      if (opt_d->count() > 0) spec.consts.d = overrides.consts.d;
      if (opt_delta->count() > 0) spec.consts.delta = overrides.consts.delta;
      if (opt_nl->count() > 0) spec.consts.n_L = overrides.consts.n_L;
      if (opt_sigma->count() > 0) spec.consts.sigma = overrides.consts.sigma;
      if (opt_a->count() > 0) spec.consts.a = overrides.consts.a;
      if (opt_b->count() > 0) spec.consts.b = overrides.consts.b;
      if (opt_r->count() > 0) spec.consts.r = overrides.consts.r;
      if (opt_eps_b->count() > 0) spec.consts.eps_b = overrides.consts.eps_b;
      if (!custom_ts.empty()) spec.ts = custom_ts;
      if (!custom_c1s.empty()) {
        spec.include_floor_c1 = false;
        spec.extra_c1 = custom_c1s;
      }
      if (floor_c1) spec.include_floor_c1 = true;
      return run_bounds_table(spec, csv_path);
    }
    if (app.got_subcommand(bench_cmd)) return run_bench_cmd(bf);
    if (app.got_subcommand(overhead_cmd)) {
      return run_overhead_cmd(bf, overhead_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
