#!/usr/bin/env python3
"""Regenerates the frozen oracle constants used by the C++ test suite.

Every numeric literal in tests/frozen_constants.hpp was produced by this
script (scipy 1.15 / mpmath 1.3) and pasted in verbatim.  Run it when adding
cases; never edit the header by hand without re-running.
"""
import mpmath as mp
import numpy as np
from scipy import stats

mp.mp.dps = 40


def f(x):
    return f"{float(x):.17g}"


def wchi2_cdf(w, u):
    """P(sum w_i Z_i^2 <= u) by Imhof's integral, oscillation-aware quadrature."""
    w = [mp.mpf(x) for x in w]
    u = mp.mpf(u)

    def integrand(t):
        if t == 0:
            return mp.mpf(0.5) * (sum(w) - u)
        th = mp.mpf(0.5) * sum(mp.atan(wi * t) for wi in w) - mp.mpf(0.5) * u * t
        lr = mp.mpf(0.25) * sum(mp.log(1 + (wi * t) ** 2) for wi in w)
        return mp.sin(th) * mp.e ** (-lr) / t

    I = mp.quadosc(integrand, [0, mp.inf], period=4 * mp.pi / u)
    return 1 - (mp.mpf(0.5) + I / mp.pi)


if __name__ == "__main__":
    print("# normal cdf")
    for x in [-3.0, -1.0, 0.5, 1.0, 2.326347874040841]:
        print(x, f(stats.norm.cdf(x)))
    print("# normal quantile")
    for p in [1e-6, 0.01, 0.15865525393145707, 0.99, 1 - 1e-6]:
        print(p, f(stats.norm.ppf(p)))
    print("# chi2 cdf")
    for df, x in [(1, 4.0), (5, 2.0), (5, 10.0), (5, 18.2), (10, 12.0)]:
        print(df, x, f(stats.chi2.cdf(x, df)))
    print("chi2.ppf(0.99, 19)", f(stats.chi2.ppf(0.99, 19)))
    print("# weighted chi2 (Imhof, quadosc)")
    for w, u in [((0.3, 1.0, 2.5), 2.0), ((0.3, 1.0, 2.5), 6.0),
                 ((0.3, 1.0, 2.5), 12.0), ((1.0, 4.0, 9.0, 12.0, 16.0), 100.0)]:
        print(w, u, mp.nstr(wchi2_cdf(w, u), 20))
    print("# binomial upper confidence bound == beta.ppf(1-delta, v+1, n-v)")
    for v, n, d in [(5, 100, 0.05), (17, 1000, 1e-6), (999, 1000, 0.01),
                    (1, 10, 0.1), (50, 200, 0.05)]:
        print(v, n, d, f(stats.beta.ppf(1 - d, v + 1, n - v)))
    print("v=0 closed form, n=100 d=0.05:", f(1 - 0.05 ** (1 / 100)))
    print("# binomial cdf spot values")
    for v, n, p in [(5, 100, 0.07), (17, 1000, 0.03), (0, 50, 0.02), (40, 50, 0.9)]:
        print(v, n, p, f(stats.binom.cdf(v, n, p)))
    print("# sigmoid smoothing")
    for y, tau in [(0.3, 0.7), (-1.2, 0.5), (2.0, 0.25)]:
        s = 1 / (1 + mp.e ** (-mp.mpf(y) / mp.mpf(tau)))
        print(y, tau, f(s), f(s * (1 - s) / mp.mpf(tau)))
    print("# portfolio N=10, uniform x, t=1.2")
    N = 10
    mu = np.array([1.05 + 0.3 * (N - i) / (N - 1) for i in range(1, N + 1)])
    sg = np.array([(0.05 + 0.6 * (N - i) / (N - 1)) / 3.0 for i in range(1, N + 1)])
    x = np.full(N, 1.0 / N)
    m, s = mu @ x, np.sqrt(np.sum(sg ** 2 * x ** 2))
    print("mu'x", f(m), "sigma(x)", f(s), "risk", f(stats.norm.cdf((1.2 - m) / s)))
    print("# normopt iid n=m=1 U=10 x=5:", f(1 - stats.chi2.cdf(4.0, 1)))

    print("# splitmix64 mix-function vectors (pure-Python reimplementation)")
    M = (1 << 64) - 1

    def sm64(z):
        z = (z + 0x9E3779B97F4A7C15) & M
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M
        return z ^ (z >> 31)

    for s in (0, 1, 1234567, 0xDEADBEEF):
        print(s, sm64(s))
    h = 42
    for v in (5, 3, 2):
        h = sm64(h ^ v)
    print("derive(42, {5,3,2})", h)
