#pragma once

// Benchmark problem instances. Everything the solver needs is carried as a
// capability record of closures so instances are value types, safely shareable
// read-only across parallel workers.
//
// Canonical orientation is minimization: minimize f(x) subject to
// P{g(x, xi) <= 0 componentwise} >= 1 - alpha, with level sets
// X_nu = {x in X : f(x) <= nu}. Problems whose native statement maximizes
// (portfolio max-return, norm optimization) carry native_sign = -1 and are
// reported as native = -nu by the CLI.
//
// The max-return portfolio folds its free threshold t into the level set
// (t == nu at the optimum), so its constraint depends on the objective bound:
// such instances are marked threshold_coupled and are bound to a concrete
// level via at_level(nu) before use.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "ccfront/errors.hpp"
#include "ccfront/math.hpp"
#include "ccfront/projections.hpp"
#include "ccfront/rng.hpp"

namespace ccfront {

struct ProblemInstance {
  std::string name;
  int dim = 0;       // decision dimension n
  int scen_dim = 0;  // scenario dimension d
  int n_rows = 0;    // constraint rows m
  double native_sign = 1.0;
  bool threshold_coupled = false;

  std::function<double(const Vec&)> objective;
  std::function<Vec(const Vec&)> objective_gradient;
  // g(x, xi) -> out (m rows; row > 0 means violated)
  std::function<void(const Vec&, const Vec&, Vec&)> constraints;
  // d/dx g_j(x, xi) -> out (n entries)
  std::function<void(const Vec&, const Vec&, int, Vec&)> constraint_grad;
  std::function<void(Rng&, Vec&)> sample;
  std::function<Vec(const Vec&, double)> project_level;
  std::function<Vec(const Vec&)> project_domain;
  // max constraint violation of X_nu membership (<= tol means member)
  std::function<double(const Vec&, double)> level_residual;
  std::function<double(const Vec&)> exact_risk;             // null if no oracle
  std::function<ProblemInstance(double)> at_level;          // null if uncoupled
  // scenario-program value/subgradient for threshold-coupled instances
  std::function<double(const Vec&, const std::vector<Vec>&)> scen_objective;
  std::function<Vec(const Vec&, const std::vector<Vec>&)> scen_subgradient;

  Vec default_start;
};

inline ProblemInstance bind_level(const ProblemInstance& p, double nu) {
  return p.at_level ? p.at_level(nu) : p;
}

inline void evaluate_constraints(const ProblemInstance& p, const Vec& x, const Vec& xi,
                                 Vec& out) {
  p.constraints(x, xi, out);
}

inline double exact_risk(const ProblemInstance& p, const Vec& x) {
  if (!p.exact_risk)
    throw unsupported_capability("exact_risk: no analytic oracle for instance '" + p.name + "'");
  return p.exact_risk(x);
}

// ---- toy 1-D: min x on [0, 10], g(x, xi) = xi - x, xi ~ N(0, 1) ----

inline ProblemInstance make_toy1d() {
  ProblemInstance p;
  p.name = "toy1d";
  p.dim = 1;
  p.scen_dim = 1;
  p.n_rows = 1;
  p.objective = [](const Vec& x) { return x[0]; };
  p.objective_gradient = [](const Vec&) { return Vec{1.0}; };
  p.constraints = [](const Vec& x, const Vec& xi, Vec& out) { out[0] = xi[0] - x[0]; };
  p.constraint_grad = [](const Vec&, const Vec&, int, Vec& out) { out[0] = -1.0; };
  p.sample = [](Rng& r, Vec& xi) { xi[0] = r.normal(); };
  p.project_level = [](const Vec& y, double nu) {
    return project_box_halfspace(y, {0.0}, {10.0}, {1.0}, nu);
  };
  p.project_domain = [](const Vec& y) { return Vec{std::clamp(y[0], 0.0, 10.0)}; };
  p.level_residual = [](const Vec& x, double nu) {
    return std::max({-x[0], x[0] - 10.0, x[0] - nu});
  };
  p.exact_risk = [](const Vec& x) { return 1.0 - normal_cdf(x[0]); };
  p.default_start = {0.0};
  return p;
}

// ---- portfolio ladder shared by both variants ----

namespace detail {

inline void portfolio_ladder(int n_stocks, Vec& mu, Vec& sigma) {
  mu.resize(n_stocks);
  sigma.resize(n_stocks);
  for (int i = 1; i <= n_stocks; ++i) {
    const double s = double(n_stocks - i) / double(n_stocks - 1);
    mu[i - 1] = 1.05 + 0.3 * s;
    sigma[i - 1] = (0.05 + 0.6 * s) / 3.0;
  }
}

inline double portfolio_exact_risk(const Vec& mu, const Vec& sigma, double threshold,
                                   const Vec& x) {
  double mean = 0.0, var = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mean += mu[i] * x[i];
    var += sigma[i] * sigma[i] * x[i] * x[i];
  }
  const double sd = std::sqrt(var);
  if (sd < 1e-300) return threshold > mean ? 1.0 : 0.0;
  return normal_cdf((threshold - mean) / sd);
}

}  // namespace detail

// Max-return portfolio bound to a concrete return threshold t (canonical
// nu = -t). The level set is the whole simplex because t == nu is folded in.
inline ProblemInstance make_portfolio_return_at(int n_stocks, double threshold);

// min -t over the simplex: P(xi'x >= t) >= 1 - alpha. Threshold-coupled;
// bind with at_level(nu) (t = -nu) before evaluating constraints.
inline ProblemInstance make_portfolio_return(int n_stocks) {
  if (n_stocks < 2) throw std::invalid_argument("portfolio: need at least 2 stocks");
  ProblemInstance p;
  Vec mu, sigma;
  detail::portfolio_ladder(n_stocks, mu, sigma);
  p.name = "portfolio-return";
  p.dim = n_stocks;
  p.scen_dim = n_stocks;
  p.n_rows = 1;
  p.native_sign = -1.0;
  p.threshold_coupled = true;
  p.sample = [mu, sigma](Rng& r, Vec& xi) {
    for (std::size_t i = 0; i < mu.size(); ++i) xi[i] = mu[i] + sigma[i] * r.normal();
  };
  p.project_level = [](const Vec& y, double) { return project_simplex(y); };
  p.project_domain = [](const Vec& y) { return project_simplex(y); };
  p.level_residual = [](const Vec& x, double) {
    double s = 0.0, worst = 0.0;
    for (double xi : x) {
      s += xi;
      worst = std::max(worst, -xi);
    }
    return std::max(worst, std::fabs(s - 1.0));
  };
  p.at_level = [n_stocks](double nu) { return make_portfolio_return_at(n_stocks, -nu); };
  p.scen_objective = [](const Vec& x, const std::vector<Vec>& scen) {
    double worst = std::numeric_limits<double>::infinity();
    for (const Vec& xi : scen) worst = std::min(worst, dot(xi, x));
    return -worst;  // canonical: f = -t, t = min_l xi_l' x
  };
  p.scen_subgradient = [](const Vec& x, const std::vector<Vec>& scen) {
    std::size_t arg = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < scen.size(); ++l) {
      const double v = dot(scen[l], x);
      if (v < worst) {
        worst = v;
        arg = l;
      }
    }
    Vec g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = -scen[arg][i];
    return g;
  };
  p.default_start = Vec(n_stocks, 1.0 / n_stocks);
  return p;
}

inline ProblemInstance make_portfolio_return_at(int n_stocks, double threshold) {
  ProblemInstance p = make_portfolio_return(n_stocks);
  Vec mu, sigma;
  detail::portfolio_ladder(n_stocks, mu, sigma);
  p.threshold_coupled = false;
  const double nu = -threshold;
  p.objective = [nu](const Vec&) { return nu; };  // t folded into the level set
  p.objective_gradient = [n_stocks](const Vec&) { return Vec(n_stocks, 0.0); };
  p.constraints = [threshold](const Vec& x, const Vec& xi, Vec& out) {
    out[0] = threshold - dot(xi, x);
  };
  p.constraint_grad = [](const Vec&, const Vec& xi, int, Vec& out) {
    for (std::size_t i = 0; i < xi.size(); ++i) out[i] = -xi[i];
  };
  p.exact_risk = [mu, sigma, threshold](const Vec& x) {
    return detail::portfolio_exact_risk(mu, sigma, threshold, x);
  };
  return p;
}

// min x' diag(sigma^2) x over the simplex: P(xi'x >= threshold) >= 1 - alpha.
inline ProblemInstance make_portfolio_variance(int n_stocks, double threshold = 1.2) {
  if (n_stocks < 2) throw std::invalid_argument("portfolio: need at least 2 stocks");
  ProblemInstance p;
  Vec mu, sigma;
  detail::portfolio_ladder(n_stocks, mu, sigma);
  Vec sigma2(n_stocks);
  for (int i = 0; i < n_stocks; ++i) sigma2[i] = sigma[i] * sigma[i];
  p.name = "portfolio-variance";
  p.dim = n_stocks;
  p.scen_dim = n_stocks;
  p.n_rows = 1;
  p.objective = [sigma2](const Vec& x) {
    double q = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) q += sigma2[i] * x[i] * x[i];
    return q;
  };
  p.objective_gradient = [sigma2](const Vec& x) {
    Vec g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * sigma2[i] * x[i];
    return g;
  };
  p.constraints = [threshold](const Vec& x, const Vec& xi, Vec& out) {
    out[0] = threshold - dot(xi, x);
  };
  p.constraint_grad = [](const Vec&, const Vec& xi, int, Vec& out) {
    for (std::size_t i = 0; i < xi.size(); ++i) out[i] = -xi[i];
  };
  p.sample = [mu, sigma](Rng& r, Vec& xi) {
    for (std::size_t i = 0; i < mu.size(); ++i) xi[i] = mu[i] + sigma[i] * r.normal();
  };
  p.project_level = [sigma2](const Vec& y, double nu) {
    return project_simplex_varcap(y, sigma2, nu);
  };
  p.project_domain = [](const Vec& y) { return project_simplex(y); };
  p.level_residual = [sigma2](const Vec& x, double nu) {
    double s = 0.0, worst = 0.0, q = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      s += x[i];
      worst = std::max(worst, -x[i]);
      q += sigma2[i] * x[i] * x[i];
    }
    return std::max({worst, std::fabs(s - 1.0), q - nu});
  };
  p.exact_risk = [mu, sigma, threshold](const Vec& x) {
    return detail::portfolio_exact_risk(mu, sigma, threshold, x);
  };
  p.default_start = Vec(n_stocks, 1.0 / n_stocks);
  return p;
}

// Norm optimization: native max sum_i x_i over 0 <= x <= U with
// P(sum_i xi_ij^2 x_i^2 <= U^2 for all j) >= 1 - alpha. Canonical f = -sum x.
// Correlated mode: xi_ij = j/d + sqrt(.5) z0_j + sqrt(.5) z_ij (column factor
// z0_j drawn first, then z_1j..z_nj). iid mode: xi_ij ~ N(0,1), which admits
// an analytic risk oracle through the (weighted) chi-square CDF.
inline ProblemInstance make_normopt(int n, int m, double U, bool correlated) {
  if (n < 1 || m < 1 || !(U > 0.0)) throw std::invalid_argument("normopt: bad shape");
  ProblemInstance p;
  p.name = correlated ? "normopt-corr" : "normopt-iid";
  p.dim = n;
  p.scen_dim = n * m;
  p.n_rows = m;
  p.native_sign = -1.0;
  p.objective = [](const Vec& x) {
    double s = 0.0;
    for (double xi : x) s += xi;
    return -s;
  };
  p.objective_gradient = [n](const Vec&) { return Vec(n, -1.0); };
  p.constraints = [n, m, U](const Vec& x, const Vec& xi, Vec& out) {
    for (int j = 0; j < m; ++j) {
      double s = 0.0;
      const double* col = xi.data() + std::size_t(j) * n;
      for (int i = 0; i < n; ++i) s += col[i] * col[i] * x[i] * x[i];
      out[j] = s - U * U;
    }
  };
  p.constraint_grad = [n](const Vec& x, const Vec& xi, int j, Vec& out) {
    const double* col = xi.data() + std::size_t(j) * n;
    for (int i = 0; i < n; ++i) out[i] = 2.0 * col[i] * col[i] * x[i];
  };
  if (correlated) {
    const double d = double(n) * double(m);
    p.sample = [n, m, d](Rng& r, Vec& xi) {
      static const double sq = std::sqrt(0.5);
      for (int j = 0; j < m; ++j) {
        const double base = double(j + 1) / d;
        const double z0 = r.normal();
        double* col = xi.data() + std::size_t(j) * n;
        for (int i = 0; i < n; ++i) col[i] = base + sq * z0 + sq * r.normal();
      }
    };
  } else {
    p.sample = [](Rng& r, Vec& xi) { r.fill_normal(xi); };
    p.exact_risk = [n, m, U](const Vec& x) {
      Vec w(n);
      for (int i = 0; i < n; ++i) w[i] = x[i] * x[i];
      const double p_row = weighted_chi2_cdf(w, U * U);
      return 1.0 - std::pow(p_row, double(m));
    };
  }
  const Vec lo(n, 0.0), hi(n, U), cvec(n, -1.0);
  p.project_level = [lo, hi, cvec](const Vec& y, double nu) {
    return project_box_halfspace(y, lo, hi, cvec, nu);
  };
  p.project_domain = [U](const Vec& y) {
    Vec x(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = std::clamp(y[i], 0.0, U);
    return x;
  };
  p.level_residual = [U](const Vec& x, double nu) {
    double worst = 0.0, s = 0.0;
    for (double xi : x) {
      worst = std::max({worst, -xi, xi - U});
      s += xi;
    }
    return std::max(worst, -s - nu);
  };
  p.default_start = Vec(n, 0.0);
  return p;
}

}  // namespace ccfront
