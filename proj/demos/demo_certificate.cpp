// Runs GP-UCB on the negated Branin function and stops as soon as the
// instantaneous-regret certificate drops below epsilon.
#include <cstdio>

#include "ucbstop/boloop.hpp"
#include "ucbstop/harness.hpp"
#include "ucbstop/objectives.hpp"

int main() {
  using namespace ucbstop;

  const auto objective = objectives::make_branin();
  const acquire::Box domain{objective.dim, 1.0};

  certify::ProblemConstants consts;
  consts.d = objective.dim;
  consts.a = 2.0;
  consts.b = 2.0;
  consts.sigma = 1e-2;
  consts.delta = 0.05;
  consts.n_L = 10.0;

  boloop::StoppingRuleConfig rule;
  rule.kind = boloop::RuleKind::UcbBr;
  rule.epsilon = 0.05;

  std::printf("one-off certificate at t=20, c1=0.01:\n");
  const auto cert = certify::make_certificate(20, 0.01, consts, rule.epsilon);
  std::printf("  tightened %.4f vs classic %.4f (ratio %.3f)\n\n",
              cert.tightened, cert.classic_full,
              cert.tightened / cert.classic_table);

  std::printf("GP-UCB on %s, epsilon=%.2f, delta=%.2f:\n",
              objective.id.c_str(), rule.epsilon, consts.delta);
  const auto run =
      boloop::run_bo(objective, domain, {gp::KernelFamily::Matern52, 0.5},
                     consts.sigma * consts.sigma, 24, 4, rule, consts, 7);

  std::printf("  %3s %10s %10s %10s\n", "t", "c1", "bound", "regret");
  for (const auto& it : run.iters) {
    if (!it.tested) continue;
    std::printf("  %3d %10.4f %10.4f %10.4f\n", it.t, it.c1, it.bound_new,
                run.regret_curve[static_cast<std::size_t>(it.t) - 1]);
  }
  if (run.stop_iteration < run.budget_T) {
    std::printf("certified after %d samples: regret below %.2f with "
                "probability at least %.2f\n",
                run.stop_iteration, rule.epsilon, 1.0 - consts.delta);
  } else {
    std::printf("budget exhausted before certification\n");
  }
  return 0;
}
