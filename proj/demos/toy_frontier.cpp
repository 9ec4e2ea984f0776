// Trace the frontier of the 1-D toy problem (min x subject to
// P{xi <= x} >= 1 - alpha, xi standard normal) and compare each certified
// point against the exact risk 1 - Phi(nu).

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
  cfg.n_mc = 20000;
  cfg.delta = 1e-3;
  cfg.alpha_low = 0.02;
  cfg.nu_spacing_abs = 0.25;
  cfg.record_wall_time = false;

  const FrontierResult res = trace_frontier(p, cfg, 42);
  std::printf("start: nu0=%.4f (initializer rho=%g)\n", res.nu0, res.init.rho);
  std::printf("%5s %10s %12s %12s %12s\n", "idx", "nu", "alpha_hat", "alpha_upper", "exact");
  for (const FrontierPoint& pt : res.points)
    std::printf("%5d %10.4f %12.5g %12.5g %12.5g%s\n", pt.index, pt.nu, pt.alpha_point,
                pt.alpha_upper, 1.0 - normal_cdf(pt.nu), pt.envelope_replaced ? "  [env]" : "");
  std::printf("stop: %s after %zu points\n", res.stop_reason.c_str(), res.points.size());
  return 0;
}
