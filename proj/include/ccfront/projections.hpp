#pragma once

// Euclidean projections onto the level sets used by the benchmark problems:
//  * probability simplex (sort-and-threshold),
//  * simplex intersected with a diagonal variance cap (KKT form
//    x_i = max{0, (y_i - mu) / (1 + 2 sigma2_i lambda)}, outer bisection on
//    lambda, inner bisection on mu),
//  * box intersected with one halfspace c'x <= nu (1-D dual bisection with
//    per-coordinate clipping).
//
// Dimension mismatches and nonpositive variance rows are contract violations
// (std::invalid_argument); an objective bound below the domain minimum raises
// infeasible_level.

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ccfront/errors.hpp"
#include "ccfront/math.hpp"

namespace ccfront {

inline Vec project_simplex(const Vec& y) {
  const std::size_t n = y.size();
  if (n == 0) throw std::invalid_argument("project_simplex: empty input");
  Vec u(y);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cssv = 0.0, theta = 0.0;
  std::size_t rho = 0;
  for (std::size_t j = 0; j < n; ++j) {
    cssv += u[j];
    const double t = (cssv - 1.0) / double(j + 1);
    if (u[j] - t > 0.0) {
      rho = j + 1;
      theta = t;
    }
  }
  (void)rho;
  Vec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::max(0.0, y[i] - theta);
  return x;
}

namespace detail {

// Solve sum_i max(0, (y_i - mu) / w_i) = 1 for mu (strictly decreasing where
// positive); returns the clipped point.
inline Vec weighted_simplex_point(const Vec& y, const Vec& w, double* mu_out = nullptr) {
  const std::size_t n = y.size();
  double ymin = y[0], ymax = y[0], wmax = w[0];
  for (std::size_t i = 0; i < n; ++i) {
    ymin = std::min(ymin, y[i]);
    ymax = std::max(ymax, y[i]);
    wmax = std::max(wmax, w[i]);
  }
  double lo = ymin - wmax, hi = ymax;
  auto total = [&](double mu) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::max(0.0, (y[i] - mu) / w[i]);
    return s;
  };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (total(mid) >= 1.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-16 * (1.0 + std::fabs(hi))) break;
  }
  const double mu = 0.5 * (lo + hi);
  if (mu_out) *mu_out = mu;
  Vec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::max(0.0, (y[i] - mu) / w[i]);
  return x;
}

}  // namespace detail

// Projection onto {x in simplex : sum_i sigma2_i x_i^2 <= nu}.
inline Vec project_simplex_varcap(const Vec& y, const Vec& sigma2, double nu) {
  const std::size_t n = y.size();
  if (n == 0 || sigma2.size() != n)
    throw std::invalid_argument("project_simplex_varcap: dimension mismatch");
  for (double s : sigma2)
    if (!(s > 0.0)) throw std::invalid_argument("project_simplex_varcap: variance row <= 0");

  auto quad = [&](const Vec& x) {
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) q += sigma2[i] * x[i] * x[i];
    return q;
  };

  Vec x0 = project_simplex(y);
  if (quad(x0) <= nu * (1.0 + 1e-12) + 1e-15) return x0;

  // Minimum reachable variance on the simplex: x_i proportional to 1/sigma2_i.
  double inv_sum = 0.0;
  for (double s : sigma2) inv_sum += 1.0 / s;
  const double qmin = 1.0 / inv_sum;
  if (nu < qmin - 1e-12 * std::max(1.0, qmin))
    throw infeasible_level("project_simplex_varcap: variance cap below simplex minimum");

  Vec minvar(n);
  for (std::size_t i = 0; i < n; ++i) minvar[i] = (1.0 / sigma2[i]) / inv_sum;
  if (nu - qmin <= 1e-10) return minvar;

  auto point_at = [&](double lam) {
    Vec w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = 1.0 + 2.0 * sigma2[i] * lam;
    return detail::weighted_simplex_point(y, w);
  };

  double lam_lo = 0.0, lam_hi = 1.0;
  while (quad(point_at(lam_hi)) > nu && lam_hi < 1e18) lam_hi *= 2.0;
  if (lam_hi >= 1e18) return minvar;

  Vec x = x0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lam_lo + lam_hi);
    x = point_at(mid);
    const double q = quad(x);
    if (q > nu) {
      lam_lo = mid;
    } else {
      lam_hi = mid;  // keep the invariant: point_at(lam_hi) is feasible
      if (nu - q <= 1e-10) return x;
    }
    if (lam_hi - lam_lo <= 1e-16 * (1.0 + lam_hi)) break;
  }
  return point_at(lam_hi);  // feasible side of the bracket
}

// Projection onto {lo <= x <= hi : c'x <= nu}.
inline Vec project_box_halfspace(const Vec& y, const Vec& lo, const Vec& hi, const Vec& c,
                                 double nu) {
  const std::size_t n = y.size();
  if (n == 0 || lo.size() != n || hi.size() != n || c.size() != n)
    throw std::invalid_argument("project_box_halfspace: dimension mismatch");
  for (std::size_t i = 0; i < n; ++i)
    if (!(lo[i] <= hi[i])) throw std::invalid_argument("project_box_halfspace: lo > hi");

  auto clip_at = [&](double lam) {
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::clamp(y[i] - lam * c[i], lo[i], hi[i]);
    return x;
  };

  Vec x = clip_at(0.0);
  if (dot(c, x) <= nu) return x;

  double cmin = 0.0;
  for (std::size_t i = 0; i < n; ++i) cmin += std::min(c[i] * lo[i], c[i] * hi[i]);
  if (nu < cmin - 1e-12 * std::max(1.0, std::fabs(cmin)))
    throw infeasible_level("project_box_halfspace: bound below box minimum");

  double lam_lo = 0.0, lam_hi = 1.0;
  while (dot(c, clip_at(lam_hi)) > nu && lam_hi < 1e18) lam_hi *= 2.0;
  if (lam_hi >= 1e18) {
    Vec xm(n);
    for (std::size_t i = 0; i < n; ++i)
      xm[i] = c[i] > 0.0 ? lo[i] : (c[i] < 0.0 ? hi[i] : std::clamp(y[i], lo[i], hi[i]));
    return xm;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lam_lo + lam_hi);
    x = clip_at(mid);
    const double r = dot(c, x) - nu;
    if (r > 0.0) {
      lam_lo = mid;
    } else {
      lam_hi = mid;  // keep the invariant: clip_at(lam_hi) is feasible
      if (-r <= 1e-10) return x;
    }
    if (lam_hi - lam_lo <= 1e-16 * (1.0 + lam_hi)) break;
  }
  return clip_at(lam_hi);
}

}  // namespace ccfront
