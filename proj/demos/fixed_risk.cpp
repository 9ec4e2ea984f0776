// Find the cheapest toy-problem objective level whose certified risk stays
// below a 5% target. The exact answer is Phi^{-1}(0.95) ~= 1.6449.

#include <cstdio>

#include "ccfront/ccfront.hpp"

int main() {
  using namespace ccfront;
  ProblemInstance p = make_toy1d();

  RunConfig cfg;
  cfg.batch_m = 10;
  cfg.iters_max = 200;
  cfg.runs_min = 6;
  cfg.runs_max = 15;
  cfg.stages = 2;
  cfg.scale_draws = 2000;
  cfg.wc_pairs = 50;
  cfg.var_points = 50;
  cfg.n_mc = 40000;
  cfg.delta = 1e-3;
  cfg.alpha_low = 0.02;
  cfg.nu_tol = 0.01;
  cfg.record_wall_time = false;

  const double target = 0.05;
  const BisectResult res = solve_fixed_risk(p, cfg, 777, target);
  std::printf("target risk     : %.4f\n", target);
  std::printf("found nu        : %.4f (exact 1.6449)\n", res.nu);
  std::printf("certified upper : %.5g (point %.5g, %lld/%lld violations)\n",
              res.solution.cert.upper, res.solution.cert.point, res.solution.cert.violations,
              res.solution.cert.n);
  std::printf("point solves    : %d\n", res.solves);
  return 0;
}
