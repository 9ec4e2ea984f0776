#pragma once

// Efficient-frontier driver. Produces the trade-off curve between the
// objective level nu and the certified violation probability by solving a
// chain of probability-minimization problems on growing level sets, each
// warm-started from its predecessor.
//
// The sweep moves in the relaxation direction (canonical nu increasing, so
// level sets are nested and risk can only improve) and stops once the
// full-sample certificate clears alpha_low. Problems stated as
// maximizations carry native_sign = -1, so their native frontier is the
// mirrored, decreasing sequence -nu.

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ccfront/config.hpp"
#include "ccfront/problems.hpp"
#include "ccfront/risk.hpp"
#include "ccfront/rng.hpp"
#include "ccfront/solver.hpp"

namespace ccfront {

// ---- feasible-start initializer ----

struct InitGuess {
  Vec x0;
  double nu0 = 0.0;   // canonical objective value at x0
  double rho = 0.0;   // final penalty weight (0 for threshold-coupled)
  int rounds = 0;     // penalty escalations used
};

// Approximate solve of the scenario counterpart: minimize f subject to
// g(x, xi_l) <= 0 for a small scenario set, via an exact-penalty projected
// subgradient method with escalating weight. Threshold-coupled instances
// instead minimize their scenario objective directly over the domain (every
// iterate is feasible by construction). `scenario_override` lets tests pin
// the scenario set.
inline InitGuess initialize_guess(const ProblemInstance& p, const RunConfig& cfg,
                                  std::uint64_t master_seed,
                                  const std::vector<Vec>* scenario_override = nullptr) {
  Rng rng = Rng::derive(master_seed, {std::uint64_t(StreamPurpose::init)});
  std::vector<Vec> scen;
  if (scenario_override) {
    scen = *scenario_override;
  } else {
    scen.assign(cfg.init_scenarios, Vec(p.scen_dim));
    for (Vec& xi : scen) p.sample(rng, xi);
  }

  InitGuess out;

  if (p.threshold_coupled) {
    Vec x = p.project_domain(p.default_start);
    Vec best_x = x;
    double best_f = p.scen_objective(x, scen);
    for (int t = 1; t <= cfg.init_iters; ++t) {
      Vec g = p.scen_subgradient(x, scen);
      const double step = 1.0 / std::sqrt(double(t));
      axpy(-step, g, x);
      x = p.project_domain(x);
      const double f = p.scen_objective(x, scen);
      if (f < best_f) {
        best_f = f;
        best_x = x;
      }
    }
    out.x0 = best_x;
    out.nu0 = best_f;
    return out;
  }

  const double feas_tol = 1e-6;
  Vec gx(p.n_rows), grad(p.dim);
  auto worst_violation = [&](const Vec& x, int& l_star, int& j_star) {
    double worst = -std::numeric_limits<double>::infinity();
    l_star = j_star = 0;
    for (std::size_t l = 0; l < scen.size(); ++l) {
      p.constraints(x, scen[l], gx);
      for (int j = 0; j < p.n_rows; ++j) {
        if (gx[j] > worst) {
          worst = gx[j];
          l_star = int(l);
          j_star = j;
        }
      }
    }
    return worst;
  };

  double rho = cfg.init_rho0;
  for (;; rho *= 2.0, ++out.rounds) {
    if (rho > 1e12)
      throw init_failure("initializer: no sampled-feasible point found for '" + p.name + "'");
    Vec x = p.project_domain(p.default_start);
    bool found = false;
    Vec best_x;
    double best_f = std::numeric_limits<double>::infinity();
    for (int t = 1; t <= cfg.init_iters; ++t) {
      int ls, js;
      const double viol = worst_violation(x, ls, js);
      Vec dir = p.objective_gradient(x);
      if (viol > 0.0) {
        p.constraint_grad(x, scen[ls], js, grad);
        axpy(rho, grad, dir);
      }
      const double f = p.objective(x);
      if (viol <= feas_tol && f < best_f) {
        best_f = f;
        best_x = x;
        found = true;
      }
      const double step = 1.0 / std::sqrt(double(t));
      axpy(-step, dir, x);
      x = p.project_domain(x);
    }
    {
      int ls, js;
      const double viol = worst_violation(x, ls, js);
      const double f = p.objective(x);
      if (viol <= feas_tol && f < best_f) {
        best_f = f;
        best_x = x;
        found = true;
      }
    }
    if (found) {
      out.x0 = best_x;
      out.nu0 = best_f;
      out.rho = rho;
      return out;
    }
  }
}

// ---- frontier sweep ----

struct FrontierPoint {
  int index = 0;       // 1-based position in the sweep
  double nu = 0.0;     // canonical level
  double nu_native = 0.0;
  double alpha_point = 1.0;
  double alpha_upper = 1.0;
  long long violations = 0;
  long long n_cert = 0;
  double alpha_inrun = 1.0;
  Vec x;
  Vec tau_base;
  bool envelope_replaced = false;
  bool early_exit = false;
  double time_s = 0.0;
  std::vector<StageRecord> stages;
};

// Enforce that certified risk never worsens as the level relaxes: each
// point may inherit the solution of any earlier (tighter) point, so replace
// it whenever a predecessor certifies strictly lower. Idempotent.
inline int monotone_envelope(std::vector<FrontierPoint>& pts) {
  int replaced = 0;
  int best = -1;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (best >= 0 && pts[std::size_t(best)].alpha_upper < pts[i].alpha_upper) {
      const FrontierPoint& b = pts[std::size_t(best)];
      pts[i].alpha_upper = b.alpha_upper;
      pts[i].alpha_point = b.alpha_point;
      pts[i].violations = b.violations;
      pts[i].alpha_inrun = b.alpha_inrun;
      pts[i].x = b.x;
      pts[i].envelope_replaced = true;
      ++replaced;
    } else {
      best = int(i);
    }
  }
  return replaced;
}

struct FrontierResult {
  InitGuess init;
  StepEstimate step;
  double nu0 = 0.0;         // first swept level (after any override)
  double nu_spacing = 0.0;  // canonical spacing actually used
  int n_inrun = 0;
  std::vector<FrontierPoint> points;
  std::string stop_reason;  // "alpha_low" | "max_points"
};

inline FrontierPoint to_frontier_point(const ProblemInstance& p, int index,
                                       PointSolveResult&& r) {
  FrontierPoint fp;
  fp.index = index;
  fp.nu = r.nu;
  fp.nu_native = p.native_sign * r.nu;
  fp.alpha_point = r.cert.point;
  fp.alpha_upper = r.cert.upper;
  fp.violations = r.cert.violations;
  fp.n_cert = r.cert.n;
  fp.alpha_inrun = r.alpha_inrun;
  fp.x = std::move(r.x);
  fp.tau_base = std::move(r.tau_base);
  fp.early_exit = r.early_exit;
  fp.time_s = r.time_s;
  fp.stages = std::move(r.stages);
  return fp;
}

inline FrontierResult trace_frontier(
    const ProblemInstance& p, const RunConfig& cfg, std::uint64_t master_seed,
    const std::function<void(const FrontierPoint&)>& on_point = nullptr) {
  FrontierResult res;
  res.init = initialize_guess(p, cfg, master_seed);
  res.nu0 = std::isnan(cfg.nu0_override) ? res.init.nu0 : cfg.nu0_override;

  double spacing = std::isnan(cfg.nu_spacing_abs) ? cfg.nu_spacing_frac * std::fabs(res.nu0)
                                                  : cfg.nu_spacing_abs;
  if (!(spacing > 1e-12)) spacing = cfg.nu_spacing_frac;  // nu0 at or near zero
  res.nu_spacing = spacing;
  res.n_inrun = in_run_sample_size(cfg.n_mc, cfg.alpha_low);

  const ScenarioSample fixed = make_fixed_sample(p, master_seed, cfg.n_mc);

  // calibrate widths and the shared base step once, at the sweep's anchor
  const ProblemInstance p0 = bind_level(p, res.nu0);
  const Vec xbar = p0.project_level(res.init.x0, res.nu0);
  Rng scale_rng = Rng::derive(master_seed, {std::uint64_t(StreamPurpose::scale), 0});
  const SmoothingSchedule sched0 = scale_schedule(p0, xbar, scale_rng, cfg.scale_draws,
                                                  cfg.scale_tol, cfg.scale_omega, cfg.tau_c,
                                                  cfg.smoothing);
  Rng step_rng = Rng::derive(master_seed, {std::uint64_t(StreamPurpose::step_estimate)});
  res.step = estimate_initial_step(p0, res.nu0, xbar, sched0, cfg, step_rng);

  const long long cap = cfg.max_points > 0 ? cfg.max_points : 1000000;
  Vec start = xbar;
  for (long long i = 1; i <= cap; ++i) {
    const double nu_i = res.nu0 + double(i - 1) * spacing;
    const ProblemInstance pi = bind_level(p, nu_i);
    PointSolveResult r = solve_frontier_point(pi, nu_i, start, res.step.gamma1, cfg, master_seed,
                                              std::uint64_t(i), fixed);
    start = r.x;
    res.points.push_back(to_frontier_point(p, int(i), std::move(r)));
    if (on_point) on_point(res.points.back());
    if (res.points.back().alpha_upper <= cfg.alpha_low) {
      res.stop_reason = "alpha_low";
      break;
    }
  }
  if (res.stop_reason.empty()) res.stop_reason = "max_points";
  monotone_envelope(res.points);
  return res;
}

// ---- fixed-risk bisection ----

struct BisectResult {
  double nu = 0.0;            // tightest level certified at or below the target
  PointSolveResult solution;  // the certifying solve at that level
  InitGuess init;
  StepEstimate step;
  int solves = 0;
  bool at_init_level = false; // the initializer's level already qualified
};

// Find (to within nu_tol) the smallest canonical level whose solved point
// certifies risk <= alpha_target. Point solves pass the target down so runs
// can exit as soon as their in-run certificate clears it.
inline BisectResult solve_fixed_risk(const ProblemInstance& p, const RunConfig& cfg,
                                     std::uint64_t master_seed, double alpha_target) {
  if (!(alpha_target > 0.0 && alpha_target < 1.0))
    throw std::invalid_argument("solve_fixed_risk: alpha_target must be in (0, 1)");
  BisectResult out;
  out.init = initialize_guess(p, cfg, master_seed);

  const ScenarioSample fixed = make_fixed_sample(p, master_seed, cfg.n_mc);
  const ProblemInstance p0 = bind_level(p, out.init.nu0);
  const Vec xbar = p0.project_level(out.init.x0, out.init.nu0);
  Rng scale_rng = Rng::derive(master_seed, {std::uint64_t(StreamPurpose::scale), 0});
  const SmoothingSchedule sched0 = scale_schedule(p0, xbar, scale_rng, cfg.scale_draws,
                                                  cfg.scale_tol, cfg.scale_omega, cfg.tau_c,
                                                  cfg.smoothing);
  Rng step_rng = Rng::derive(master_seed, {std::uint64_t(StreamPurpose::step_estimate)});
  const StepEstimate step = estimate_initial_step(p0, out.init.nu0, xbar, sched0, cfg, step_rng);
  out.step = step;

  std::uint64_t idx = 0;
  Vec start = xbar;
  auto solve_at = [&](double nu) {
    const ProblemInstance pi = bind_level(p, nu);
    PointSolveResult r = solve_frontier_point(pi, nu, start, step.gamma1, cfg, master_seed, ++idx,
                                              fixed, alpha_target);
    ++out.solves;
    start = r.x;
    return r;
  };

  // the initializer's level is the tightest we ever consider
  PointSolveResult r0 = solve_at(out.init.nu0);
  if (r0.cert.upper <= alpha_target) {
    out.nu = out.init.nu0;
    out.solution = std::move(r0);
    out.at_init_level = true;
    return out;
  }

  // grow the bracket upward until a level qualifies
  double lo = out.init.nu0;
  double width = std::max(cfg.nu_spacing_frac * std::fabs(out.init.nu0), cfg.nu_tol);
  double hi = lo;
  PointSolveResult best;
  for (int t = 0;; ++t) {
    if (t >= 200) throw init_failure("solve_fixed_risk: no level reached the target risk");
    hi += width;
    width *= 2.0;
    PointSolveResult r = solve_at(hi);
    if (r.cert.upper <= alpha_target) {
      best = std::move(r);
      break;
    }
    lo = hi;
  }

  while (lo < hi - cfg.nu_tol) {
    const double mid = 0.5 * (lo + hi);
    PointSolveResult r = solve_at(mid);
    if (r.cert.upper <= alpha_target) {
      hi = mid;
      best = std::move(r);
    } else {
      lo = mid;
    }
  }
  out.nu = hi;
  out.solution = std::move(best);
  return out;
}

}  // namespace ccfront
