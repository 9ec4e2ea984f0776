#pragma once

// Small dense-vector helpers plus the special functions the library needs:
// normal CDF/quantile, regularized incomplete gamma (chi-square CDF), and the
// CDF of a positively weighted sum of independent chi-square(1) variables via
// Imhof's inversion integral.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ccfront {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// y += alpha * x
inline void axpy(double alpha, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline double normal_pdf(double x) {
  static constexpr double inv_sqrt_2pi = 0.3989422804014326779;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

inline double normal_cdf(double x) {
  static constexpr double inv_sqrt2 = 0.7071067811865475244;
  return 0.5 * std::erfc(-x * inv_sqrt2);
}

// Inverse standard normal CDF: Acklam's rational approximation polished with
// two Halley steps, good to ~1e-15 over (0, 1).
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw std::domain_error("normal_quantile: p outside [0, 1]");
  }
  // Halley against the CDF loses relative precision in the upper tail (the
  // CDF saturates at 1); mirror so the polish always runs on the small side.
  if (p > 0.5) return -normal_quantile(1.0 - p);
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1.0 - plow;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= phigh) {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  for (int it = 0; it < 2; ++it) {
    const double e = normal_cdf(x) - p;
    const double u = e / normal_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);  // Halley
  }
  return x;
}

inline double lchoose(long n, long k) {
  return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
         std::lgamma(double(n - k) + 1.0);
}

// Regularized lower incomplete gamma P(a, x).
inline double gammp(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::domain_error("gammp: bad arguments");
  if (x == 0.0) return 0.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    // series expansion
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - lg);
  }
  // continued fraction for Q(a, x), modified Lentz
  const double tiny = 1e-300;
  double b0 = x + 1.0 - a, c0 = 1.0 / tiny, d0 = 1.0 / b0, h = d0;
  for (int i = 1; i <= 500; ++i) {
    const double an = -double(i) * (double(i) - a);
    b0 += 2.0;
    d0 = an * d0 + b0;
    if (std::fabs(d0) < tiny) d0 = tiny;
    c0 = b0 + an / c0;
    if (std::fabs(c0) < tiny) c0 = tiny;
    d0 = 1.0 / d0;
    const double del = d0 * c0;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  const double q = std::exp(-x + a * std::log(x) - lg) * h;
  return 1.0 - q;
}

inline double chi2_cdf(double df, double x) { return gammp(0.5 * df, 0.5 * x); }

namespace detail {

// Imhof inversion integrand for P(sum_i w_i z_i^2 > u):
//   f(t) = sin(theta(t)) / (t * rho(t)),
//   theta = 0.5 * sum atan(w_i t) - 0.5 * u * t,
//   rho   = prod (1 + w_i^2 t^2)^(1/4).
inline double imhof_integrand(const Vec& w, double u, double t) {
  if (t == 0.0) {
    double s = 0.0;
    for (double wi : w) s += wi;
    return 0.5 * (s - u);
  }
  double theta = -0.5 * u * t, logrho = 0.0;
  for (double wi : w) {
    const double wt = wi * t;
    theta += 0.5 * std::atan(wt);
    logrho += 0.25 * std::log1p(wt * wt);
  }
  return std::sin(theta) * std::exp(-logrho) / t;
}

}  // namespace detail

// P(Q <= u) for Q = sum_i w_i z_i^2, z_i iid standard normal, w_i >= 0.
// Near-equal weights route through the chi-square closed form; otherwise
// Imhof's integral is evaluated by composite Simpson with step refinement.
inline double weighted_chi2_cdf(const Vec& weights, double u) {
  if (u < 0.0) return 0.0;
  Vec w;
  double wmax = 0.0;
  for (double wi : weights) {
    if (wi < 0.0) throw std::domain_error("weighted_chi2_cdf: negative weight");
    wmax = std::max(wmax, wi);
  }
  for (double wi : weights)
    if (wi > 1e-12 * wmax) w.push_back(wi);
  if (w.empty()) return u >= 0.0 ? 1.0 : 0.0;
  const double wmin = *std::min_element(w.begin(), w.end());
  if ((wmax - wmin) <= 1e-12 * wmax)
    return chi2_cdf(double(w.size()), u / wmax);

  // Upper limit: grow T until the non-oscillatory envelope 1/(t*rho) is
  // negligible.
  double T = 1.0;
  auto log_envelope = [&](double t) {
    double lr = 0.0;
    for (double wi : w) lr += 0.25 * std::log1p(wi * wi * t * t);
    return -std::log(t) - lr;
  };
  while (log_envelope(T) > std::log(1e-13) && T < 1e9) T *= 2.0;

  // Composite Simpson, refined until stable.
  const double period = 4.0 * 3.14159265358979323846 / std::max(u, 1.0);
  std::size_t n = std::max<std::size_t>(2000, std::size_t(8.0 * T / period));
  n = std::min<std::size_t>(n, 1u << 23);
  if (n % 2) ++n;
  double prev = std::numeric_limits<double>::infinity(), integral = 0.0;
  for (int pass = 0; pass < 8; ++pass) {
    const double h = T / double(n);
    double s = detail::imhof_integrand(w, u, 0.0) + detail::imhof_integrand(w, u, T);
    for (std::size_t i = 1; i < n; ++i)
      s += detail::imhof_integrand(w, u, double(i) * h) * (i % 2 ? 4.0 : 2.0);
    integral = s * h / 3.0;
    if (std::fabs(integral - prev) < 1e-10 * (1.0 + std::fabs(integral))) break;
    prev = integral;
    if (n >= (1u << 23)) break;
    n *= 2;
  }
  const double p_exceed = 0.5 + integral / 3.14159265358979323846;
  return std::clamp(1.0 - p_exceed, 0.0, 1.0);
}

}  // namespace ccfront
