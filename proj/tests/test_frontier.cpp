#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ccfront/frontier.hpp"
#include "ccfront/io.hpp"

using namespace ccfront;

namespace {

RunConfig fast_config() {
  RunConfig c;
  c.batch_m = 10;
  c.iters_max = 100;
  c.runs_min = 4;
  c.runs_max = 12;
  c.stages = 2;
  c.scale_draws = 1000;
  c.wc_pairs = 40;
  c.var_points = 40;
  c.est_batch = 10;
  c.n_mc = 20000;
  c.delta = 1e-3;
  c.record_wall_time = false;
  return c;
}

}  // namespace

TEST_CASE("initializer solves the pinned scenario program", "[frontier]") {
  ProblemInstance p = make_toy1d();
  RunConfig cfg;
  const std::vector<Vec> scen{{0.1}, {0.5}, {-0.2}};
  const InitGuess g = initialize_guess(p, cfg, 123, &scen);
  // x >= max xi = 0.5; best sampled-feasible objective approaches it from above
  CHECK(g.x0[0] >= 0.5 - 1e-6);
  CHECK(g.x0[0] <= 0.53);
  CHECK(g.nu0 == g.x0[0]);
  // rho0 = 1 exactly cancels the objective on this problem, so one escalation
  CHECK(g.rounds == 1);
  CHECK(g.rho == 2.0);
}

TEST_CASE("initializer handles threshold-coupled problems by direct descent", "[frontier]") {
  ProblemInstance p = make_portfolio_return(2);
  RunConfig cfg;
  const std::vector<Vec> scen{{1.3, 1.0}, {0.9, 1.1}};
  const InitGuess g = initialize_guess(p, cfg, 9, &scen);
  // max-min return: lines cross at x = (0.2, 0.8) with value 1.06
  CHECK(g.nu0 == Catch::Approx(-1.06).margin(0.02));
  CHECK(g.x0[0] == Catch::Approx(0.2).margin(0.05));
  CHECK(g.x0[1] == Catch::Approx(0.8).margin(0.05));
  CHECK(g.rho == 0.0);
  CHECK(g.rounds == 0);
}

TEST_CASE("initializer reports failure when no feasible point exists", "[frontier]") {
  ProblemInstance p = make_toy1d();  // domain [0, 10]
  RunConfig cfg;
  cfg.init_iters = 100;
  const std::vector<Vec> scen{{20.0}};  // needs x >= 20
  CHECK_THROWS_AS(initialize_guess(p, cfg, 1, &scen), init_failure);
}

TEST_CASE("monotone envelope copies the best predecessor forward", "[frontier]") {
  const std::vector<double> uppers{0.5, 0.3, 0.4, 0.2, 0.25};
  std::vector<FrontierPoint> pts;
  for (std::size_t i = 0; i < uppers.size(); ++i) {
    FrontierPoint fp;
    fp.index = int(i) + 1;
    fp.alpha_upper = uppers[i];
    fp.alpha_point = 0.9 * uppers[i];
    fp.violations = static_cast<long long>(i);
    fp.x = {double(i)};
    pts.push_back(fp);
  }
  CHECK(monotone_envelope(pts) == 2);
  const std::vector<double> want{0.5, 0.3, 0.3, 0.2, 0.2};
  const std::vector<bool> flag{false, false, true, false, true};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(pts[i].alpha_upper == want[i]);
    CHECK(pts[i].envelope_replaced == flag[i]);
  }
  CHECK(pts[2].x == pts[1].x);  // inherits the better predecessor's solution
  CHECK(pts[2].alpha_point == pts[1].alpha_point);
  CHECK(pts[4].x == pts[3].x);
  CHECK(monotone_envelope(pts) == 0);  // idempotent
}

TEST_CASE("frontier sweep on the analytic problem", "[frontier]") {
  ProblemInstance p = make_toy1d();
  RunConfig cfg = fast_config();
  cfg.nu_spacing_abs = 0.25;
  cfg.alpha_low = 0.02;
  const std::uint64_t seed = 5;

  std::vector<int> seen;
  const FrontierResult res =
      trace_frontier(p, cfg, seed, [&](const FrontierPoint& fp) { seen.push_back(fp.index); });

  CHECK(res.nu0 == res.init.nu0);
  CHECK(res.nu_spacing == 0.25);
  CHECK(res.n_inrun == in_run_sample_size(cfg.n_mc, cfg.alpha_low));
  CHECK(res.n_inrun == 500);
  CHECK(res.stop_reason == "alpha_low");
  REQUIRE(!res.points.empty());
  CHECK(res.points.back().alpha_upper <= 0.02);

  double prev_upper = 2.0;
  for (std::size_t i = 0; i < res.points.size(); ++i) {
    const FrontierPoint& fp = res.points[i];
    CHECK(fp.index == int(i) + 1);
    CHECK(seen[i] == fp.index);
    CHECK(fp.nu == res.nu0 + double(i) * 0.25);
    CHECK(fp.nu_native == fp.nu);
    CHECK(fp.time_s == 0.0);
    CHECK(fp.alpha_upper <= prev_upper);
    prev_upper = fp.alpha_upper;
    CHECK(p.level_residual(fp.x, fp.nu) <= 1e-8);
    CHECK(fp.n_cert == cfg.n_mc);

    // the point estimate cannot beat the exact optimum at this level, and it
    // must agree with the exact risk of the point it certifies
    const double opt = 1.0 - normal_cdf(fp.nu);
    const double sd_opt = std::sqrt(opt * (1.0 - opt) / cfg.n_mc);
    CHECK(fp.alpha_point >= opt - 4.0 * sd_opt - 2e-3);
    const double er = exact_risk(p, fp.x);
    const double sd = std::sqrt(er * (1.0 - er) / cfg.n_mc);
    CHECK(std::fabs(fp.alpha_point - er) <= 4.0 * sd + 2e-3);
  }

  // equal seed reproduces byte-identical output; the certificate counts are real
  const FrontierResult res2 = trace_frontier(p, cfg, seed);
  CHECK(io::frontier_csv(res.points) == io::frontier_csv(res2.points));
  const FrontierResult res3 = trace_frontier(p, cfg, seed + 1);
  CHECK(io::frontier_csv(res.points) != io::frontier_csv(res3.points));
}

TEST_CASE("maximization problems sweep their native level downward", "[frontier]") {
  RunConfig cfg = fast_config();
  cfg.problem.name = "portfolio-return";
  cfg.problem.n_stocks = 4;
  cfg.nu0_override = -1.25;
  cfg.nu_spacing_abs = 0.02;
  cfg.max_points = 3;
  cfg.alpha_low = 0.001;
  cfg.n_mc = 5000;
  cfg.delta = 0.01;
  ProblemInstance p = make_problem(cfg.problem);

  const FrontierResult res = trace_frontier(p, cfg, 17);
  CHECK(res.stop_reason == "max_points");
  REQUIRE(res.points.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const FrontierPoint& fp = res.points[i];
    CHECK(fp.nu == -1.25 + double(i) * 0.02);
    CHECK(fp.nu_native == -fp.nu);  // native return threshold decreases
    CHECK(p.level_residual(fp.x, fp.nu) <= 1e-8);
    CHECK(fp.alpha_point >= 0.0);
    CHECK(fp.alpha_upper > fp.alpha_point);
    CHECK(fp.alpha_upper < 1.0);
  }
  CHECK(res.points[0].nu_native > res.points[1].nu_native);
  CHECK(res.points[1].nu_native > res.points[2].nu_native);
}

TEST_CASE("fixed-risk bisection certifies the target", "[frontier]") {
  ProblemInstance p = make_toy1d();
  RunConfig cfg = fast_config();
  cfg.alpha_low = 0.01;
  cfg.nu_tol = 0.01;
  const BisectResult bis = solve_fixed_risk(p, cfg, 2024, 0.05);

  INFO("nu=" << bis.nu << " solves=" << bis.solves << " at_init=" << bis.at_init_level
             << " init.nu0=" << bis.init.nu0);
  CHECK(bis.solution.cert.upper <= 0.05);
  CHECK(p.level_residual(bis.solution.x, bis.nu) <= 1e-9);
  // certified 5% forces the point (and so the level) past the exact quantile,
  // less Monte Carlo slack; the returned level collapses onto it from above
  CHECK(bis.nu >= 1.58);
  CHECK(bis.nu <= 2.6);
  CHECK(exact_risk(p, bis.solution.x) <= 0.07);
  CHECK(bis.solves >= 1);
  if (!bis.at_init_level) CHECK(bis.solves >= 2);
  CHECK_THROWS_AS(solve_fixed_risk(p, cfg, 2024, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_fixed_risk(p, cfg, 2024, 1.0), std::invalid_argument);
}

TEST_CASE("a bracket of one tolerance width skips the bisection loop", "[frontier]") {
  ProblemInstance p = make_toy1d();
  RunConfig cfg = fast_config();
  cfg.alpha_low = 0.01;
  cfg.nu_tol = 1.0;  // first bracket step already has width nu_tol
  const BisectResult bis = solve_fixed_risk(p, cfg, 2024, 0.1);
  INFO("nu=" << bis.nu << " solves=" << bis.solves << " init.nu0=" << bis.init.nu0);
  CHECK(bis.solution.cert.upper <= 0.1);
  if (!bis.at_init_level) {
    // every post-bracket level is at least nu_tol above the failing one, so
    // the while loop cannot split it further
    CHECK(bis.nu >= bis.init.nu0 + 1.0 - 1e-12);
  }
}
