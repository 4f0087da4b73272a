// Builds the ideal pipeline, evaluates both inequalities exactly and by
// sampling, and prints the numbers.

#include <cstdio>

#include "kcbs/kcbs.hpp"

int main() {
  using namespace kcbs;

  const Report exact = run_ideal(RunConfig{});
  std::printf("exact   eq1 %.10f  eq2 %.10f  overlap %.10f\n", exact.eq1_lhs.mean, exact.eq2_lhs.mean,
              exact.overlap_term.mean);

  RunConfig cfg;
  cfg.shots = 200'000;
  cfg.jitter_sigma = 0.02;
  cfg.seed = 3;
  const Report mc = run_montecarlo(cfg);
  std::printf("sampled eq1 %.5f +- %.5f  eq2 %.5f +- %.5f  closure %.6f\n", mc.eq1_lhs.mean, mc.eq1_lhs.std_error,
              mc.eq2_lhs.mean, mc.eq2_lhs.std_error, mc.audit.closure_overlap);
  return 0;
}
