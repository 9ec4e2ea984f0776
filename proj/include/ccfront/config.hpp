#pragma once

// Run configuration. Plain data with defaults; the JSON binding lives in
// io.hpp so the numeric core stays dependency-free.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ccfront/errors.hpp"
#include "ccfront/problems.hpp"
#include "ccfront/smoothing.hpp"

namespace ccfront {

struct ProblemSpec {
  std::string name = "toy1d";
  // portfolio families
  int n_stocks = 10;
  double threshold = 1.2;  // portfolio_variance return floor
  // norm optimization
  int n = 10;
  int m = 10;
  double U = 10.0;
};

inline ProblemInstance make_problem(const ProblemSpec& s) {
  if (s.name == "toy1d") return make_toy1d();
  if (s.name == "portfolio-return") return make_portfolio_return(s.n_stocks);
  if (s.name == "portfolio-variance") return make_portfolio_variance(s.n_stocks, s.threshold);
  if (s.name == "normopt-corr") return make_normopt(s.n, s.m, s.U, true);
  if (s.name == "normopt-iid") return make_normopt(s.n, s.m, s.U, false);
  throw config_error("unknown problem '" + s.name + "'");
}

struct RunConfig {
  ProblemSpec problem;

  // smoothed subgradient solver
  SmoothingKind smoothing = SmoothingKind::sigmoid;
  int batch_m = 20;         // scenarios per subgradient step
  int iters_max = 1000;     // iterations per run (upper end when randomized)
  int runs_min = 10;
  int runs_max = 50;
  int stages = 3;
  double tau_c = 0.1;       // per-stage width shrink factor
  bool random_iters = true; // run length ~ Uniform{1..iters_max}
  bool strict_theory = false;

  // width calibration
  int scale_draws = 10000;
  double scale_tol = 1e-6;
  double scale_omega = 1.0;

  // initial step estimation
  int wc_pairs = 200;
  int var_points = 200;
  int est_batch = 20;
  double r_frac = 0.1;

  // step adaptation / termination
  int check_every = 3;
  int term_checks = 5;
  double delta1 = 1e-4;
  double delta2 = 1e-2;
  double gamma_incr = 10.0;
  double gamma_decr = 10.0;

  // Monte Carlo certification
  int n_mc = 100000;
  double delta = 1e-6;

  // frontier sweep
  double nu_spacing_frac = 0.005;
  double alpha_low = 1e-4;
  int max_points = 0;  // 0: sweep until the alpha_low stop fires

  // feasible-start initializer
  int init_scenarios = 10;
  int init_iters = 10000;
  double init_rho0 = 1.0;

  // fixed-risk bisection
  double nu_tol = 1e-3;

  // reporting
  bool record_wall_time = true;

  // optional pinning of the sweep geometry (unset when NaN)
  double nu0_override = std::numeric_limits<double>::quiet_NaN();
  double nu_spacing_abs = std::numeric_limits<double>::quiet_NaN();
};

inline std::vector<std::string> validate(const RunConfig& c) {
  std::vector<std::string> bad;
  auto need = [&](bool ok, const char* msg) {
    if (!ok) bad.emplace_back(msg);
  };
  need(c.batch_m >= 1, "batch_m must be >= 1");
  need(c.iters_max >= 1, "iters_max must be >= 1");
  need(c.runs_min >= 1, "runs_min must be >= 1");
  need(c.runs_max >= c.runs_min, "runs_max must be >= runs_min");
  need(c.stages >= 1, "stages must be >= 1");
  need(c.tau_c > 0.0 && c.tau_c <= 1.0, "tau_c must be in (0, 1]");
  need(c.scale_draws >= 1, "scale_draws must be >= 1");
  need(c.scale_tol > 0.0, "scale_tol must be positive");
  need(c.scale_omega > 0.0, "scale_omega must be positive");
  need(c.wc_pairs >= 1, "wc_pairs must be >= 1");
  need(c.var_points >= 1, "var_points must be >= 1");
  need(c.est_batch >= 1, "est_batch must be >= 1");
  need(c.r_frac > 0.0, "r_frac must be positive");
  need(c.check_every >= 1, "check_every must be >= 1");
  need(c.term_checks >= 1, "term_checks must be >= 1");
  need(c.delta1 > 0.0, "delta1 must be positive");
  need(c.delta2 >= c.delta1, "delta2 must be >= delta1");
  need(c.gamma_incr >= 1.0, "gamma_incr must be >= 1");
  need(c.gamma_decr >= 1.0, "gamma_decr must be >= 1");
  need(c.n_mc >= 1, "n_mc must be >= 1");
  need(c.delta > 0.0 && c.delta < 1.0, "delta must be in (0, 1)");
  need(c.nu_spacing_frac > 0.0, "nu_spacing_frac must be positive");
  need(c.alpha_low > 0.0 && c.alpha_low < 1.0, "alpha_low must be in (0, 1)");
  need(c.max_points >= 0, "max_points must be >= 0");
  need(c.init_scenarios >= 1, "init_scenarios must be >= 1");
  need(c.init_iters >= 1, "init_iters must be >= 1");
  need(c.init_rho0 > 0.0, "init_rho0 must be positive");
  need(c.nu_tol > 0.0, "nu_tol must be positive");
  if (!std::isnan(c.nu_spacing_abs) && !(c.nu_spacing_abs > 0.0))
    bad.emplace_back("nu_spacing_abs must be positive when set");
  if (c.problem.name == "portfolio-return" || c.problem.name == "portfolio-variance")
    need(c.problem.n_stocks >= 2, "n_stocks must be >= 2");
  if (c.problem.name == "normopt-corr" || c.problem.name == "normopt-iid") {
    need(c.problem.n >= 1 && c.problem.m >= 1, "normopt shape must be positive");
    need(c.problem.U > 0.0, "U must be positive");
  }
  return bad;
}

}  // namespace ccfront
