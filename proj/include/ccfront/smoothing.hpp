#pragma once

// Smooth (or piecewise-smooth) approximations of the step indicator
// 1{y > 0}, parameterized by a width tau > 0. All three are nondecreasing
// with values in [0, 1] and approach the indicator as tau -> 0:
//
//   sigmoid     1 / (1 + exp(-y/tau)); smooth everywhere, phi(0) = 1/2.
//   cubic_under cubic ramp on [-tau, 0]: reaches 1 already at y = 0, so it
//               upper-bounds the indicator of the *closed* event {y >= 0}.
//   cubic_over  cubic ramp on [0, tau]: phi(0) = 0, so the smoothed risk
//               never undercounts strict violations from the feasible side.
//
// Widths follow a stage schedule tau_{k,j} = beta_j * tau_c^(k-1), where the
// per-row base beta_j is calibrated from sampled constraint magnitudes at the
// starting point (lower median of |g_j|, floored at s_tol, scaled by omega).

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ccfront/problems.hpp"
#include "ccfront/rng.hpp"

namespace ccfront {

enum class SmoothingKind { sigmoid, cubic_under, cubic_over };

inline const char* kind_name(SmoothingKind k) {
  switch (k) {
    case SmoothingKind::sigmoid: return "sigmoid";
    case SmoothingKind::cubic_under: return "cubic_under";
    case SmoothingKind::cubic_over: return "cubic_over";
  }
  return "?";
}

inline bool kind_from_string(const std::string& s, SmoothingKind& out) {
  if (s == "sigmoid") out = SmoothingKind::sigmoid;
  else if (s == "cubic_under") out = SmoothingKind::cubic_under;
  else if (s == "cubic_over") out = SmoothingKind::cubic_over;
  else return false;
  return true;
}

namespace detail {

inline double cubic_ramp(double u) {  // u in [-1, 0] maps to [0, 1]
  return 1.0 - 2.0 * u * u * u - 3.0 * u * u;
}

inline double cubic_ramp_d(double u) { return -6.0 * (u * u + u); }

}  // namespace detail

inline double phi(SmoothingKind k, double y, double tau) {
  switch (k) {
    case SmoothingKind::sigmoid: {
      if (y >= 0.0) return 1.0 / (1.0 + std::exp(-y / tau));
      const double e = std::exp(y / tau);
      return e / (1.0 + e);
    }
    case SmoothingKind::cubic_under: {
      if (y <= -tau) return 0.0;
      if (y >= 0.0) return 1.0;
      return detail::cubic_ramp(y / tau);
    }
    case SmoothingKind::cubic_over: {
      if (y <= 0.0) return 0.0;
      if (y >= tau) return 1.0;
      return detail::cubic_ramp((y - tau) / tau);
    }
  }
  return 0.0;
}

inline double dphi(SmoothingKind k, double y, double tau) {
  switch (k) {
    case SmoothingKind::sigmoid: {
      // s(1-s)/tau, but evaluated through the small factor: s and 1-s swap
      // roles across y = 0, so r = min(s, 1-s) keeps full relative precision
      // (and underflows cleanly to 0 deep in the tails).
      const double e = std::exp(-std::fabs(y) / tau);
      const double r = e / (1.0 + e);
      return r * (1.0 - r) / tau;
    }
    case SmoothingKind::cubic_under: {
      if (y <= -tau || y >= 0.0) return 0.0;
      return detail::cubic_ramp_d(y / tau) / tau;
    }
    case SmoothingKind::cubic_over: {
      if (y <= 0.0 || y >= tau) return 0.0;
      return detail::cubic_ramp_d((y - tau) / tau) / tau;
    }
  }
  return 0.0;
}

struct SmoothingSchedule {
  SmoothingKind kind = SmoothingKind::sigmoid;
  double tau_c = 0.1;
  Vec beta;  // per-row base width

  double tau(int stage, int row) const {  // stage k >= 1
    return beta[row] * std::pow(tau_c, stage - 1);
  }
};

// Calibrate beta_j = omega * max(lower-median of |g_j(xbar, xi)|, s_tol)
// over n_draws sampled scenarios.
inline SmoothingSchedule scale_schedule(const ProblemInstance& p, const Vec& xbar, Rng& rng,
                                        int n_draws, double s_tol, double omega, double tau_c,
                                        SmoothingKind kind) {
  std::vector<Vec> mags(p.n_rows, Vec(n_draws));
  Vec xi(p.scen_dim), g(p.n_rows);
  for (int s = 0; s < n_draws; ++s) {
    p.sample(rng, xi);
    p.constraints(xbar, xi, g);
    for (int j = 0; j < p.n_rows; ++j) mags[j][s] = std::fabs(g[j]);
  }
  SmoothingSchedule sched;
  sched.kind = kind;
  sched.tau_c = tau_c;
  sched.beta.resize(p.n_rows);
  for (int j = 0; j < p.n_rows; ++j) {
    auto mid = mags[j].begin() + (n_draws - 1) / 2;
    std::nth_element(mags[j].begin(), mid, mags[j].end());
    sched.beta[j] = omega * std::max(*mid, s_tol);
  }
  return sched;
}

}  // namespace ccfront
