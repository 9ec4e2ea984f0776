#pragma once

// Monte Carlo risk certification. A decision's violation probability is
// estimated on a scenario sample that is drawn once per (seed, problem) and
// reused everywhere, so certificates are comparable across the whole run and
// in-run estimates on a prefix of the sample are consistent with the final
// full-sample certificate.
//
// The certificate is the exact one-sided binomial upper confidence bound:
// the largest alpha whose Bin(n, alpha) CDF at the observed violation count
// still reaches the confidence level delta. P{true risk > bound} <= delta.

#include <cmath>
#include <cstdint>
#include <vector>

#include "ccfront/math.hpp"
#include "ccfront/problems.hpp"
#include "ccfront/rng.hpp"

namespace ccfront {

struct ScenarioSample {
  int n = 0, d = 0;
  std::vector<double> data;  // row-major n x d

  const double* row(int i) const { return data.data() + std::size_t(i) * d; }
};

inline ScenarioSample draw_sample(const ProblemInstance& p, Rng& rng, int n) {
  ScenarioSample s;
  s.n = n;
  s.d = p.scen_dim;
  s.data.resize(std::size_t(n) * p.scen_dim);
  Vec xi(p.scen_dim);
  for (int i = 0; i < n; ++i) {
    p.sample(rng, xi);
    std::copy(xi.begin(), xi.end(), s.data.begin() + std::size_t(i) * p.scen_dim);
  }
  return s;
}

inline ScenarioSample make_fixed_sample(const ProblemInstance& p, std::uint64_t master_seed,
                                        int n) {
  Rng rng = Rng::derive(master_seed, {std::uint64_t(StreamPurpose::fixed_sample)});
  return draw_sample(p, rng, n);
}

// Violations are strict: a scenario counts iff max_j g_j(x, xi) > 0.
inline long long count_violations(const ProblemInstance& p, const Vec& x,
                                  const ScenarioSample& sample, int n_use) {
  Vec xi(p.scen_dim), g(p.n_rows);
  long long v = 0;
  for (int i = 0; i < n_use; ++i) {
    const double* r = sample.row(i);
    xi.assign(r, r + p.scen_dim);
    p.constraints(x, xi, g);
    for (int j = 0; j < p.n_rows; ++j) {
      if (g[j] > 0.0) {
        ++v;
        break;
      }
    }
  }
  return v;
}

// log P(Bin(n, alpha) <= v) via a log-sum-exp over the first v+1 terms,
// with the log binomial coefficients built incrementally.
inline double log_binomial_cdf(long long v, long long n, double alpha) {
  if (v < 0) return -std::numeric_limits<double>::infinity();
  if (v >= n || alpha <= 0.0) return 0.0;
  if (alpha >= 1.0) return -std::numeric_limits<double>::infinity();
  const double la = std::log(alpha), l1a = std::log1p(-alpha);
  std::vector<double> terms(std::size_t(v) + 1);
  double lc = 0.0;  // log C(n, i)
  double mx = -std::numeric_limits<double>::infinity();
  for (long long i = 0; i <= v; ++i) {
    const double t = lc + double(i) * la + double(n - i) * l1a;
    terms[std::size_t(i)] = t;
    mx = std::max(mx, t);
    lc += std::log(double(n - i)) - std::log(double(i + 1));
  }
  double s = 0.0;
  for (double t : terms) s += std::exp(t - mx);
  return mx + std::log(s);
}

// Largest alpha with P(Bin(n, alpha) <= v) >= delta (one-sided upper bound
// at confidence 1 - delta). Bisection returns the conservative (upper) end.
inline double risk_upper_bound(long long v, long long n, double delta) {
  if (n <= 0) throw std::invalid_argument("risk_upper_bound: n must be positive");
  if (v < 0 || v > n) throw std::invalid_argument("risk_upper_bound: v out of range");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("risk_upper_bound: delta must be in (0, 1)");
  if (v >= n) return 1.0;
  if (v == 0) return -std::expm1(std::log(delta) / double(n));
  const double ld = std::log(delta);
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (log_binomial_cdf(v, n, mid) >= ld)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

// In-run certification size: enough scenarios to resolve risks down to
// alpha_low (about 10 expected violations), never more than the full sample.
inline int in_run_sample_size(int n_mc, double alpha_low) {
  const double want = std::ceil(10.0 / alpha_low);
  return int(std::min(double(n_mc), want));
}

struct RiskEstimate {
  long long violations = 0;
  long long n = 0;
  double point = 0.0;  // v / n
  double upper = 1.0;  // binomial UCB at confidence 1 - delta
};

inline RiskEstimate estimate_risk(const ProblemInstance& p, const Vec& x,
                                  const ScenarioSample& sample, int n_use, double delta) {
  RiskEstimate e;
  e.n = n_use;
  e.violations = count_violations(p, x, sample, n_use);
  e.point = double(e.violations) / double(n_use);
  e.upper = risk_upper_bound(e.violations, n_use, delta);
  return e;
}

}  // namespace ccfront
