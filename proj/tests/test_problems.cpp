#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ccfront/problems.hpp"
#include "ccfront/risk.hpp"
#include "frozen_constants.hpp"
#include "oracles.hpp"

using namespace ccfront;

TEST_CASE("toy instance wiring", "[problems]") {
  ProblemInstance p = make_toy1d();
  CHECK(p.dim == 1);
  CHECK(p.scen_dim == 1);
  CHECK(p.n_rows == 1);
  CHECK(p.native_sign == 1.0);
  CHECK_FALSE(p.threshold_coupled);
  CHECK(p.objective({3.5}) == 3.5);
  CHECK(p.objective_gradient({3.5}) == Vec{1.0});
  Vec g(1);
  p.constraints({2.0}, {2.7}, g);
  CHECK(g[0] == Catch::Approx(0.7).epsilon(1e-15));
  Vec gr(1);
  p.constraint_grad({2.0}, {2.7}, 0, gr);
  CHECK(gr[0] == -1.0);
  CHECK(p.exact_risk({1.0}) == Catch::Approx(frozen::toy_risk_at_1).epsilon(1e-14));
  const Vec px = p.project_level({5.0}, 3.0);
  REQUIRE(px.size() == 1);
  CHECK(px[0] <= 3.0);
  CHECK(px[0] == Catch::Approx(3.0).margin(1e-9));
  CHECK(p.project_domain({-4.0}) == Vec{0.0});
  CHECK(p.level_residual({2.0}, 3.0) <= 0.0);
  CHECK(p.level_residual({4.0}, 3.0) == Catch::Approx(1.0));
}

TEST_CASE("portfolio ladder matches frozen values", "[problems]") {
  Vec mu, sigma;
  detail::portfolio_ladder(10, mu, sigma);
  CHECK(mu[0] == Catch::Approx(frozen::pf10_mu1).epsilon(1e-15));
  CHECK(mu[1] == Catch::Approx(frozen::pf10_mu2).epsilon(1e-15));
  CHECK(mu[9] == Catch::Approx(frozen::pf10_mu10).epsilon(1e-15));
  CHECK(sigma[0] == Catch::Approx(frozen::pf10_sigma1).epsilon(1e-15));
  CHECK(sigma[9] == Catch::Approx(frozen::pf10_sigma10).epsilon(1e-15));
}

TEST_CASE("portfolio exact risk at the uniform mix", "[problems]") {
  ProblemInstance p = make_portfolio_variance(10, 1.2);
  const Vec x(10, 0.1);
  // uniform portfolio: mean 1.2, so risk at threshold 1.2 is exactly 1/2
  CHECK(p.exact_risk(x) == Catch::Approx(frozen::pf10_unif_risk_t12).epsilon(1e-12));
  CHECK(p.objective(x) ==
        Catch::Approx(frozen::pf10_unif_sigma * frozen::pf10_unif_sigma).epsilon(1e-13));
  // gradient of x' diag(sigma2) x against finite differences
  const Vec grad = p.objective_gradient(x);
  for (int i : {0, 4, 9}) {
    const double fd = oracles::central_diff(
        [&](double t) {
          Vec z = x;
          z[std::size_t(i)] = t;
          return p.objective(z);
        },
        x[std::size_t(i)], 1e-6);
    CHECK(grad[std::size_t(i)] == Catch::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("portfolio sampling matches its stated distribution", "[problems]") {
  ProblemInstance p = make_portfolio_variance(10, 1.2);
  Rng rng = Rng::derive(314, {std::uint64_t(StreamPurpose::oracle)});
  const int n = 20000;
  Vec xi(10), mean(10, 0.0);
  const Vec x(10, 0.1);
  int below = 0;
  Vec g(1);
  for (int s = 0; s < n; ++s) {
    p.sample(rng, xi);
    for (int i = 0; i < 10; ++i) mean[std::size_t(i)] += xi[std::size_t(i)];
    p.constraints(x, xi, g);
    if (g[0] > 0.0) ++below;
  }
  Vec mu, sigma;
  detail::portfolio_ladder(10, mu, sigma);
  for (int i = 0; i < 10; ++i)
    CHECK(mean[std::size_t(i)] / n ==
          Catch::Approx(mu[std::size_t(i)]).margin(4.0 * sigma[std::size_t(i)] / std::sqrt(double(n))));
  // empirical violation rate at the uniform mix ~ exact risk 0.5
  CHECK(double(below) / n == Catch::Approx(0.5).margin(0.012));
}

TEST_CASE("max-return portfolio binds its threshold through the level", "[problems]") {
  ProblemInstance p = make_portfolio_return(4);
  CHECK(p.threshold_coupled);
  CHECK(p.native_sign == -1.0);
  CHECK_FALSE(p.exact_risk);  // no oracle until bound
  CHECK_THROWS_AS(exact_risk(p, Vec(4, 0.25)), unsupported_capability);

  const double nu = -1.2;  // native threshold t = 1.2
  ProblemInstance b = bind_level(p, nu);
  CHECK_FALSE(b.threshold_coupled);
  CHECK(b.objective(Vec(4, 0.25)) == nu);  // objective folded into the level
  Vec g(1);
  b.constraints({0.25, 0.25, 0.25, 0.25}, {1.0, 1.2, 1.4, 1.2}, g);
  CHECK(g[0] == Catch::Approx(1.2 - 1.2).margin(1e-15));
  b.constraints({1.0, 0.0, 0.0, 0.0}, {1.0, 1.2, 1.4, 1.2}, g);
  CHECK(g[0] == Catch::Approx(0.2).epsilon(1e-12));
  // uniform mix of the 4-stock ladder has mean return 1.2 -> risk 1/2 at t=1.2
  CHECK(b.exact_risk(Vec(4, 0.25)) == Catch::Approx(0.5).epsilon(1e-12));
  // level set is the whole simplex regardless of nu
  const Vec proj = b.project_level({2.0, 0.0, 0.0, 0.0}, nu);
  CHECK(proj[0] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("max-return scenario program pieces are consistent", "[problems]") {
  ProblemInstance p = make_portfolio_return(2);
  const std::vector<Vec> scen{{1.3, 1.0}, {0.9, 1.1}};
  const Vec x{0.5, 0.5};
  // worst scenario at x: min(1.15, 1.0) = 1.0 -> objective -1.0
  CHECK(p.scen_objective(x, scen) == Catch::Approx(-1.0).epsilon(1e-15));
  const Vec sg = p.scen_subgradient(x, scen);
  CHECK(sg[0] == -0.9);
  CHECK(sg[1] == -1.1);
  // at a point where the other scenario is worst
  const Vec x2{0.0, 1.0};  // values: 1.0 vs 1.1 -> scenario 0 is worst
  const Vec sg2 = p.scen_subgradient(x2, scen);
  CHECK(sg2[0] == -1.3);
  CHECK(sg2[1] == -1.0);
}

TEST_CASE("norm optimization constraint layout is column-major", "[problems]") {
  ProblemInstance p = make_normopt(2, 2, 2.0, false);
  CHECK(p.scen_dim == 4);
  CHECK(p.n_rows == 2);
  CHECK(p.native_sign == -1.0);
  const Vec x{0.5, 1.5};
  const Vec xi{1.0, 2.0, 3.0, 0.5};  // col 0 = (1, 2), col 1 = (3, 0.5)
  Vec g(2);
  p.constraints(x, xi, g);
  CHECK(g[0] == Catch::Approx(1.0 * 0.25 + 4.0 * 2.25 - 4.0).epsilon(1e-14));
  CHECK(g[1] == Catch::Approx(9.0 * 0.25 + 0.25 * 2.25 - 4.0).epsilon(1e-14));
  Vec gr(2);
  p.constraint_grad(x, xi, 1, gr);
  CHECK(gr[0] == Catch::Approx(2.0 * 9.0 * 0.5).epsilon(1e-14));
  CHECK(gr[1] == Catch::Approx(2.0 * 0.25 * 1.5).epsilon(1e-14));
  CHECK(p.objective(x) == -2.0);
  CHECK(p.objective_gradient(x) == Vec{-1.0, -1.0});
}

TEST_CASE("norm optimization iid risk oracle", "[problems]") {
  // n = m = 1, U = 2, x = 1: risk = 1 - chi2_cdf(1, 4)
  ProblemInstance p1 = make_normopt(1, 1, 2.0, false);
  CHECK(p1.exact_risk({1.0}) == Catch::Approx(frozen::normopt_1_1_risk).epsilon(1e-12));
  // m rows of iid columns: survival powers up
  ProblemInstance p3 = make_normopt(1, 3, 2.0, false);
  const double r1 = p1.exact_risk({1.0});
  CHECK(p3.exact_risk({1.0}) ==
        Catch::Approx(1.0 - std::pow(1.0 - r1, 3.0)).epsilon(1e-12));
  // Monte Carlo agreement at an asymmetric allocation
  ProblemInstance p = make_normopt(2, 2, 2.0, false);
  const Vec x{0.8, 0.5};
  const double exact = p.exact_risk(x);
  const ScenarioSample s = make_fixed_sample(p, 2718, 40000);
  const long long v = count_violations(p, x, s, 40000);
  CHECK(double(v) / 40000.0 == Catch::Approx(exact).margin(0.01));
  // correlated variant has no analytic oracle
  ProblemInstance pc = make_normopt(2, 2, 2.0, true);
  CHECK_FALSE(pc.exact_risk);
}

TEST_CASE("correlated norm-opt sampler follows its documented draw order", "[problems]") {
  const int n = 3, m = 2;
  ProblemInstance p = make_normopt(n, m, 1.0, true);
  Rng r1 = Rng::derive(55, {std::uint64_t(StreamPurpose::fixed_sample)});
  Rng r2 = Rng::derive(55, {std::uint64_t(StreamPurpose::fixed_sample)});
  Vec xi(n * m);
  p.sample(r1, xi);
  const double d = double(n) * double(m), sq = std::sqrt(0.5);
  for (int j = 0; j < m; ++j) {
    const double z0 = r2.normal();
    for (int i = 0; i < n; ++i) {
      const double want = double(j + 1) / d + sq * z0 + sq * r2.normal();
      CHECK(xi[std::size_t(j) * n + i] == want);
    }
  }
  // common column factor induces ~0.5 correlation within a column
  Rng r3 = Rng::derive(56, {std::uint64_t(StreamPurpose::fixed_sample)});
  const int draws = 4000;
  double s00 = 0, s01 = 0, s00sq = 0, s01sq = 0, cross = 0, crosscol = 0, s10 = 0;
  for (int t = 0; t < draws; ++t) {
    p.sample(r3, xi);
    const double a = xi[0], b = xi[1], c = xi[std::size_t(n)];  // (0,0), (1,0), (0,1)
    s00 += a;
    s01 += b;
    s10 += c;
    s00sq += a * a;
    s01sq += b * b;
    cross += a * b;
    crosscol += a * c;
  }
  const double ma = s00 / draws, mb = s01 / draws, mc = s10 / draws;
  const double va = s00sq / draws - ma * ma, vb = s01sq / draws - mb * mb;
  const double corr_within = (cross / draws - ma * mb) / std::sqrt(va * vb);
  CHECK(corr_within == Catch::Approx(0.5).margin(0.06));
  const double corr_across = (crosscol / draws - ma * mc) / std::sqrt(va * va);
  CHECK(corr_across == Catch::Approx(0.0).margin(0.06));
  CHECK(ma == Catch::Approx(1.0 / 6.0).margin(0.07));
  CHECK(mc == Catch::Approx(2.0 / 6.0).margin(0.07));
}

TEST_CASE("level residual and domain projection per family", "[problems]") {
  ProblemInstance pv = make_portfolio_variance(3, 1.2);
  const Vec u(3, 1.0 / 3.0);
  CHECK(pv.level_residual(u, 1.0) <= 0.0);
  CHECK(pv.level_residual(u, 1e-9) > 0.0);  // variance cap violated
  const Vec pd = pv.project_domain({0.9, 0.9, -0.5});
  double s = 0.0;
  for (double v : pd) {
    s += v;
    CHECK(v >= 0.0);
  }
  CHECK(s == Catch::Approx(1.0).margin(1e-12));

  ProblemInstance pn = make_normopt(2, 1, 3.0, false);
  CHECK(pn.level_residual({1.0, 1.0}, -1.0) <= 0.0);   // sum = 2 >= 1 = -nu... (nu = -1)
  CHECK(pn.level_residual({1.0, 1.0}, -5.0) > 0.0);    // requires sum >= 5
  CHECK(pn.project_domain({-1.0, 9.0}) == Vec{0.0, 3.0});
  const Vec pl = pn.project_level({0.2, 0.1}, -1.0);   // halfspace -sum <= -1 binds
  CHECK(pl[0] + pl[1] == Catch::Approx(1.0).margin(1e-8));
}

TEST_CASE("factory argument validation", "[problems]") {
  CHECK_THROWS_AS(make_portfolio_return(1), std::invalid_argument);
  CHECK_THROWS_AS(make_portfolio_variance(1), std::invalid_argument);
  CHECK_THROWS_AS(make_normopt(0, 1, 1.0, false), std::invalid_argument);
  CHECK_THROWS_AS(make_normopt(1, 1, 0.0, false), std::invalid_argument);
}
