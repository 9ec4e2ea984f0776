#pragma once

// Projected stochastic subgradient minimization of the smoothed violation
// probability over a level set X_nu = {x in X : f(x) <= nu}.
//
// The smoothed objective is E[max_j phi(g_j(x, xi); tau_j)]; each step uses a
// small scenario batch, picks the arg-max row per scenario (ties to the
// lowest index), and accumulates dphi * grad g. Widths shrink by tau_c per
// stage and the step size shrinks by tau_c^2 to match.
//
// A point solve runs stages of short runs. Run lengths are drawn uniformly
// from {1..iters_max}; runs chain through last iterates while an incumbent
// (best in-run risk estimate, strict improvement only) is tracked. The step
// size adapts on a check window and the stage ends early once the window
// stops improving. In strict_theory mode the step stays fixed and stages
// restart from a uniformly random run's last iterate instead of the
// incumbent — the form the convergence analysis actually covers.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ccfront/config.hpp"
#include "ccfront/problems.hpp"
#include "ccfront/risk.hpp"
#include "ccfront/rng.hpp"
#include "ccfront/smoothing.hpp"

namespace ccfront {

struct SubgradScratch {
  Vec xi, g, grad;
};

// Mean of max_j phi over rows [row_begin, row_end) of scen; fills G with the
// averaged subgradient of the smoothed objective at x.
inline double smoothed_subgradient(const ProblemInstance& p, const SmoothingSchedule& sched,
                                   int stage, const Vec& x, const ScenarioSample& scen,
                                   int row_begin, int row_end, Vec& G, SubgradScratch& sc) {
  sc.xi.resize(p.scen_dim);
  sc.g.resize(p.n_rows);
  sc.grad.resize(p.dim);
  G.assign(p.dim, 0.0);
  double val = 0.0;
  const int count = row_end - row_begin;
  for (int l = row_begin; l < row_end; ++l) {
    const double* r = scen.row(l);
    sc.xi.assign(r, r + p.scen_dim);
    p.constraints(x, sc.xi, sc.g);
    int jstar = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < p.n_rows; ++j) {
      const double v = phi(sched.kind, sc.g[j], sched.tau(stage, j));
      if (v > best) {  // strict: ties resolve to the lowest index
        best = v;
        jstar = j;
      }
    }
    val += best;
    const double w = dphi(sched.kind, sc.g[jstar], sched.tau(stage, jstar));
    if (w != 0.0) {
      p.constraint_grad(x, sc.xi, jstar, sc.grad);
      for (int i = 0; i < p.dim; ++i) G[i] += w * sc.grad[i];
    }
  }
  const double inv = 1.0 / double(count);
  for (double& gi : G) gi *= inv;
  return val * inv;
}

struct StepEstimate {
  double gamma1 = 0.0;  // stage-1 base step
  double rho = 0.0;     // sampled worst-case subgradient Lipschitz ratio
  double sigma2 = 0.0;  // sampled worst-case second moment of single draws
  bool rho_floored = false;
  bool sigma_floored = false;
};

namespace detail {

inline Vec ball_point_in_level(const ProblemInstance& p, double nu, const Vec& xbar, double r,
                               Rng& rng) {
  Vec z(p.dim);
  rng.fill_normal(z);
  const double nz = std::sqrt(dot(z, z));
  const double rad = r * std::pow(rng.uniform(), 1.0 / double(p.dim));
  Vec y(xbar);
  if (nz > 0.0)
    for (int i = 0; i < p.dim; ++i) y[i] += rad * z[i] / nz;
  return p.project_level(y, nu);
}

}  // namespace detail

// gamma1 = 1 / sqrt(rho * sigma2 * (iters_max + 1) * runs_min), with rho and
// sigma2 sampled near xbar inside X_nu. Each Lipschitz pair reuses one
// scenario batch for both endpoints (common random numbers), so the ratio
// measures the smoothed field's variation rather than sampling noise.
inline StepEstimate estimate_initial_step(const ProblemInstance& p, double nu, const Vec& xbar,
                                          const SmoothingSchedule& sched, const RunConfig& cfg,
                                          Rng& rng) {
  const double nx = std::sqrt(dot(xbar, xbar));
  const double r = cfg.r_frac * (nx > 0.0 ? nx : 1.0);
  SubgradScratch sc;
  Vec gy, gz;
  StepEstimate est;
  for (int t = 0; t < cfg.wc_pairs; ++t) {
    const Vec y = detail::ball_point_in_level(p, nu, xbar, r, rng);
    const Vec z = detail::ball_point_in_level(p, nu, xbar, r, rng);
    const ScenarioSample batch = draw_sample(p, rng, cfg.est_batch);
    const double d = dist(y, z);
    if (d < 1e-14) continue;
    smoothed_subgradient(p, sched, 1, y, batch, 0, cfg.est_batch, gy, sc);
    smoothed_subgradient(p, sched, 1, z, batch, 0, cfg.est_batch, gz, sc);
    est.rho = std::max(est.rho, dist(gy, gz) / d);
  }
  for (int t = 0; t < cfg.var_points; ++t) {
    const Vec w = detail::ball_point_in_level(p, nu, xbar, r, rng);
    const ScenarioSample batch = draw_sample(p, rng, cfg.est_batch);
    double acc = 0.0;
    for (int i = 0; i < cfg.est_batch; ++i) {
      smoothed_subgradient(p, sched, 1, w, batch, i, i + 1, gy, sc);
      acc += dot(gy, gy);
    }
    est.sigma2 = std::max(est.sigma2, acc / double(cfg.est_batch));
  }
  if (est.rho < 1e-12) {
    est.rho = 1e-12;
    est.rho_floored = true;
  }
  if (est.sigma2 < 1e-12) {
    est.sigma2 = 1e-12;
    est.sigma_floored = true;
  }
  est.gamma1 =
      1.0 / std::sqrt(est.rho * est.sigma2 * double(cfg.iters_max + 1) * double(cfg.runs_min));
  return est;
}

// ---- step adaptation and termination ----

struct StepRule {
  int check_every = 3;
  int term_checks = 5;
  int runs_min = 10;
  int runs_max = 50;
  double delta1 = 1e-4;
  double delta2 = 1e-2;
  double gamma_incr = 10.0;
  double gamma_decr = 10.0;
};

inline StepRule step_rule_of(const RunConfig& c) {
  return {c.check_every, c.term_checks, c.runs_min, c.runs_max,
          c.delta1,      c.delta2,     c.gamma_incr, c.gamma_decr};
}

// Relative progress of the freshest check_every run estimates against the
// incumbent value as of check_every runs ago. abar[0] is the stage's starting
// point, abar[r] the estimate after run r; requires r >= check_every.
// Positive: some recent run beat the old incumbent. Convention at a zero
// incumbent: an exact repeat counts as flat, anything worse as -inf.
inline double relative_progress(const std::vector<double>& abar, int r, int check_every) {
  const double inc =
      *std::min_element(abar.begin(), abar.begin() + (r - check_every) + 1);
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= check_every; ++i) {
    const double recent = abar[std::size_t(r + 1 - i)];
    double term;
    if (inc == 0.0)
      term = recent == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
    else
      term = (inc - recent) / inc;
    best = std::max(best, term);
  }
  return best;
}

struct StepDecision {
  bool checked = false;
  double progress = 0.0;
  double gamma_factor = 1.0;
  bool terminate = false;
};

// Decision after completing run r of a stage. Terminates at runs_max always,
// or past runs_min once the last term_checks checks all regressed.
inline StepDecision step_check(const std::vector<double>& abar, int r, const StepRule& rule) {
  StepDecision d;
  if (r % rule.check_every == 0 && r >= rule.check_every) {
    d.checked = true;
    d.progress = relative_progress(abar, r, rule.check_every);
    if (d.progress >= -rule.delta1)
      d.gamma_factor = rule.gamma_incr;
    else if (d.progress <= -rule.delta2)
      d.gamma_factor = 1.0 / rule.gamma_decr;
    if (r >= rule.runs_min) {
      int bad = 0;
      for (int rc = r; rc >= rule.check_every; rc -= rule.check_every) {
        if (relative_progress(abar, rc, rule.check_every) < -rule.delta1)
          ++bad;
        else
          break;
      }
      if (bad >= rule.term_checks) d.terminate = true;
    }
  }
  if (r >= rule.runs_max) d.terminate = true;
  return d;
}

// ---- staged point solve ----

struct RunRecord {
  int iters = 0;
  double alpha_bar = 0.0;  // in-run point estimate of the run's last iterate
  double gamma = 0.0;      // step used during the run
};

struct StageRecord {
  int stage = 0;
  double gamma_init = 0.0;
  std::vector<RunRecord> runs;
  bool stopped_early = false;  // terminated before runs_max
};

struct PointSolveResult {
  Vec x;
  double nu = 0.0;
  RiskEstimate cert;          // full-sample certificate of x
  double alpha_inrun = 1.0;   // in-run estimate backing the returned x
  bool early_exit = false;    // stopped because the in-run UCB beat the target
  std::vector<StageRecord> stages;
  Vec tau_base;               // calibrated per-row widths at this point
  double time_s = 0.0;
};

// Solve one frontier point. `p` must already be bound at level nu. The start
// is projected into X_nu. gamma1 is the shared stage-1 base step (estimated
// once per sweep); widths are recalibrated here at the projected start.
// When alpha_target > 0 the solve exits as soon as a run's in-run upper
// confidence bound drops below it (used by the fixed-risk bisection).
inline PointSolveResult solve_frontier_point(const ProblemInstance& p, double nu, const Vec& start,
                                             double gamma1, const RunConfig& cfg,
                                             std::uint64_t master_seed, std::uint64_t point_index,
                                             const ScenarioSample& fixed,
                                             double alpha_target = 0.0) {
  const auto t0 = std::chrono::steady_clock::now();
  PointSolveResult res;
  res.nu = nu;

  Rng scale_rng =
      Rng::derive(master_seed, {std::uint64_t(StreamPurpose::scale), point_index});
  const Vec x0 = p.project_level(start, nu);
  const SmoothingSchedule sched = scale_schedule(p, x0, scale_rng, cfg.scale_draws, cfg.scale_tol,
                                                 cfg.scale_omega, cfg.tau_c, cfg.smoothing);
  res.tau_base = sched.beta;

  const int n_inrun = in_run_sample_size(cfg.n_mc, cfg.alpha_low);
  auto inrun_count = [&](const Vec& x) { return count_violations(p, x, fixed, n_inrun); };
  auto inrun_point = [&](long long v) { return double(v) / double(n_inrun); };

  Vec x_inc = x0;
  double a_inc = inrun_point(inrun_count(x0));

  const StepRule rule = step_rule_of(cfg);
  SubgradScratch sc;
  Vec G;
  Vec x_chain = x0;
  bool exited = false;

  for (int k = 1; k <= cfg.stages && !exited; ++k) {
    Rng run_rng = Rng::derive(
        master_seed, {std::uint64_t(StreamPurpose::point_run), point_index, std::uint64_t(k)});
    StageRecord stage;
    stage.stage = k;
    const double shrink = std::pow(cfg.tau_c, k - 1);
    const double gamma_base = shrink * shrink * gamma1;
    stage.gamma_init = gamma_base;
    double gamma = gamma_base;

    // stage starts at the incumbent (strict mode: the carried chain point)
    x_chain = cfg.strict_theory ? x_chain : x_inc;
    std::vector<double> abar{inrun_point(inrun_count(x_chain))};
    std::vector<Vec> last_iterates;

    int r = 0;
    while (true) {
      ++r;
      const int n_iters = cfg.random_iters ? int(run_rng.uniform_int(1, cfg.iters_max))
                                           : cfg.iters_max;
      const double gamma_run = gamma;
      for (int l = 0; l < n_iters; ++l) {
        const ScenarioSample batch = draw_sample(p, run_rng, cfg.batch_m);
        smoothed_subgradient(p, sched, k, x_chain, batch, 0, cfg.batch_m, G, sc);
        Vec y = x_chain;
        axpy(-gamma_run, G, y);
        x_chain = p.project_level(y, nu);
      }
      last_iterates.push_back(x_chain);
      const long long v = inrun_count(x_chain);
      const double ab = inrun_point(v);
      abar.push_back(ab);
      stage.runs.push_back({n_iters, ab, gamma_run});
      if (ab < a_inc) {
        a_inc = ab;
        x_inc = x_chain;
      }
      if (alpha_target > 0.0 && risk_upper_bound(v, n_inrun, cfg.delta) < alpha_target) {
        res.early_exit = true;
        exited = true;
        if (!cfg.strict_theory) {
          // make the qualifying iterate the answer even if a lower point
          // estimate was seen before (the certificate is what qualified)
          a_inc = ab;
          x_inc = x_chain;
        }
        break;
      }
      const StepDecision d = step_check(abar, r, rule);
      if (d.checked && !cfg.strict_theory) gamma *= d.gamma_factor;
      if (d.terminate) {
        stage.stopped_early = r < rule.runs_max;
        break;
      }
    }

    if (cfg.strict_theory && !exited) {
      const std::uint64_t pick = run_rng.uniform_int(0, std::uint64_t(last_iterates.size() - 1));
      x_chain = last_iterates[std::size_t(pick)];
      // incumbent trace is reported but does not steer strict mode
    }
    res.stages.push_back(std::move(stage));
  }

  res.x = cfg.strict_theory ? x_chain : x_inc;
  res.alpha_inrun = cfg.strict_theory
                        ? inrun_point(inrun_count(res.x))
                        : a_inc;
  res.cert = estimate_risk(p, res.x, fixed, cfg.n_mc, cfg.delta);
  if (cfg.record_wall_time)
    res.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace ccfront
