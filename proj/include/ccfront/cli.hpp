#pragma once

// Command-line front end, exposed in-process so tests can drive it without
// spawning binaries.
//
//   ccfront run    --out DIR [--config FILE] [--seed N] [--replicates R]
//                  [--mode frontier|fixed-risk] [--alpha A]
//   ccfront report --out DIR
//
// `run` writes, under DIR: config_resolved.json, summary.json, and one
// rep_XXX/ directory per replicate holding frontier.csv, sol_XXX.json and
// diagnostics.txt (or fixedrisk.json in fixed-risk mode). Replicates are
// independent (replicate seed = splitmix64(seed ^ index)) and may run
// concurrently: CCF_THREADS caps the worker count, and outputs are
// byte-identical at any thread count for a given seed.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage/config errors. Failures
// print a single machine-readable JSON object to stderr.

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "ccfront/config.hpp"
#include "ccfront/errors.hpp"
#include "ccfront/frontier.hpp"
#include "ccfront/io.hpp"

namespace ccfront {
namespace cli {

namespace fs = std::filesystem;
using io::json;

inline int fail(int code, const char* kind, const std::string& detail) {
  std::cerr << json{{"error", kind}, {"detail", detail}}.dump() << "\n";
  return code;
}

inline unsigned thread_count(std::size_t jobs) {
  unsigned n = 1;
  if (const char* env = std::getenv("CCF_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && v >= 1 && v <= 64) n = unsigned(v);
  }
  return unsigned(std::min<std::size_t>(n, jobs));
}

inline std::string rep_dir_name(int rep) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "rep_%03d", rep);
  return buf;
}

namespace detail {

struct RepOutcome {
  json summary;
  std::string stdout_line;
};

inline RepOutcome run_frontier_rep(const ProblemInstance& p, const RunConfig& cfg,
                                   std::uint64_t rep_seed, const fs::path& dir) {
  const FrontierResult res = trace_frontier(p, cfg, rep_seed);
  io::spill((dir / "frontier.csv").string(), io::frontier_csv(res.points));
  for (const FrontierPoint& pt : res.points) {
    char name[24];
    std::snprintf(name, sizeof name, "sol_%03d.json", pt.index);
    io::spill((dir / name).string(), io::point_to_json(pt).dump(2) + "\n");
  }
  io::spill((dir / "diagnostics.txt").string(), io::frontier_diagnostics(res));

  const FrontierPoint& last = res.points.back();
  double total_time = 0.0;
  for (const FrontierPoint& pt : res.points) total_time += pt.time_s;
  RepOutcome out;
  out.summary = json{{"dir", dir.filename().string()},
                     {"points", res.points.size()},
                     {"stop_reason", res.stop_reason},
                     {"nu_final_native", last.nu_native},
                     {"alpha_upper_final", last.alpha_upper},
                     {"joint_confidence", 1.0 - cfg.delta * double(res.points.size())},
                     {"time_s", total_time}};
  out.stdout_line = dir.filename().string() + ": points=" + std::to_string(res.points.size()) +
                    " stop=" + res.stop_reason + " nu_final=" + io::fmt17(last.nu_native) +
                    " alpha_upper=" + io::fmt17(last.alpha_upper);
  return out;
}

inline RepOutcome run_fixed_risk_rep(const ProblemInstance& p, const RunConfig& cfg,
                                     std::uint64_t rep_seed, double alpha_target,
                                     const fs::path& dir) {
  const BisectResult res = solve_fixed_risk(p, cfg, rep_seed, alpha_target);
  const json out_j{{"alpha_target", alpha_target},
                   {"nu", res.nu},
                   {"nu_native", p.native_sign * res.nu},
                   {"at_init_level", res.at_init_level},
                   {"solves", res.solves},
                   {"init_nu0", res.init.nu0},
                   {"x", res.solution.x},
                   {"alpha_point", res.solution.cert.point},
                   {"alpha_upper", res.solution.cert.upper},
                   {"violations", res.solution.cert.violations},
                   {"n_cert", res.solution.cert.n}};
  io::spill((dir / "fixedrisk.json").string(), out_j.dump(2) + "\n");
  std::ostringstream diag;
  diag << "initializer: nu0=" << io::fmt17(res.init.nu0) << " rho=" << io::fmt17(res.init.rho)
       << " rounds=" << res.init.rounds << "\n"
       << "step: gamma1=" << io::fmt17(res.step.gamma1) << " rho_hat=" << io::fmt17(res.step.rho)
       << " sigma2_hat=" << io::fmt17(res.step.sigma2) << "\n"
       << "bisection: solves=" << res.solves << " nu=" << io::fmt17(res.nu)
       << " alpha_upper=" << io::fmt17(res.solution.cert.upper) << "\n";
  io::spill((dir / "diagnostics.txt").string(), diag.str());

  RepOutcome out;
  out.summary = json{{"dir", dir.filename().string()},
                     {"nu_native", p.native_sign * res.nu},
                     {"alpha_upper", res.solution.cert.upper},
                     {"solves", res.solves},
                     {"at_init_level", res.at_init_level}};
  out.stdout_line = dir.filename().string() + ": nu=" + io::fmt17(p.native_sign * res.nu) +
                    " alpha_upper=" + io::fmt17(res.solution.cert.upper) +
                    " solves=" + std::to_string(res.solves);
  return out;
}

}  // namespace detail

inline int cmd_run(const std::string& config_path, std::uint64_t seed, const std::string& out_dir,
                   int replicates, const std::string& mode, double alpha_target) {
  RunConfig cfg;
  if (!config_path.empty()) cfg = io::parse_config_file(config_path);
  if (mode == "fixed-risk" && !(alpha_target > 0.0 && alpha_target < 1.0))
    throw config_error("fixed-risk mode needs --alpha in (0, 1)");
  const ProblemInstance problem = make_problem(cfg.problem);

  fs::create_directories(out_dir);
  io::spill((fs::path(out_dir) / "config_resolved.json").string(),
            io::config_to_json(cfg).dump(2) + "\n");

  const std::size_t n_reps = std::size_t(replicates);
  std::vector<detail::RepOutcome> outcomes(n_reps);
  for (int r = 0; r < replicates; ++r)
    fs::create_directories(fs::path(out_dir) / rep_dir_name(r));

  std::atomic<int> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  auto worker = [&]() {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= replicates) return;
      {
        std::lock_guard<std::mutex> lk(err_mu);
        if (first_error) return;
      }
      try {
        const std::uint64_t rep_seed = splitmix64(seed ^ std::uint64_t(r));
        const fs::path dir = fs::path(out_dir) / rep_dir_name(r);
        outcomes[std::size_t(r)] =
            mode == "frontier"
                ? detail::run_frontier_rep(problem, cfg, rep_seed, dir)
                : detail::run_fixed_risk_rep(problem, cfg, rep_seed, alpha_target, dir);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  const unsigned n_threads = thread_count(std::size_t(replicates));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  json reps = json::array();
  for (const detail::RepOutcome& o : outcomes) reps.push_back(o.summary);
  const json summary{{"mode", mode},          {"problem", cfg.problem.name},
                     {"seed", seed},          {"replicates", replicates},
                     {"delta", cfg.delta},    {"reps", reps}};
  io::spill((fs::path(out_dir) / "summary.json").string(), summary.dump(2) + "\n");
  for (const detail::RepOutcome& o : outcomes) std::cout << o.stdout_line << "\n";
  return 0;
}

inline int cmd_report(const std::string& out_dir) {
  json summary;
  try {
    summary = json::parse(io::slurp((fs::path(out_dir) / "summary.json").string()));
  } catch (const json::exception& e) {
    throw config_error(std::string("summary parse: ") + e.what());
  }
  const std::string mode = summary.at("mode").get<std::string>();
  std::cout << "mode=" << mode << " problem=" << summary.at("problem").get<std::string>()
            << " seed=" << summary.at("seed").get<std::uint64_t>()
            << " replicates=" << summary.at("replicates").get<int>()
            << " delta=" << io::fmt17(summary.at("delta").get<double>()) << "\n";
  for (const json& rep : summary.at("reps")) {
    const std::string dir = rep.at("dir").get<std::string>();
    if (mode == "frontier") {
      std::cout << dir << ": points=" << rep.at("points").get<int>()
                << " stop=" << rep.at("stop_reason").get<std::string>()
                << " nu_final=" << io::fmt17(rep.at("nu_final_native").get<double>())
                << " alpha_upper_final=" << io::fmt17(rep.at("alpha_upper_final").get<double>())
                << " joint_conf>=" << io::fmt17(rep.at("joint_confidence").get<double>()) << "\n";
    } else {
      std::cout << dir << ": nu=" << io::fmt17(rep.at("nu_native").get<double>())
                << " alpha_upper=" << io::fmt17(rep.at("alpha_upper").get<double>())
                << " solves=" << rep.at("solves").get<int>() << "\n";
    }
  }
  if (mode == "frontier") {
    for (const json& rep : summary.at("reps")) {
      const std::string dir = rep.at("dir").get<std::string>();
      const auto rows =
          io::read_frontier_csv((fs::path(out_dir) / dir / "frontier.csv").string());
      std::cout << "frontier " << dir << " (nu alpha_upper):\n";
      for (const io::FrontierRow& r : rows)
        std::cout << io::fmt17(r.nu) << " " << io::fmt17(r.alpha_upper) << "\n";
    }
  }
  return 0;
}

inline int cli_main(const std::vector<std::string>& args) {
  CLI::App app{"efficient frontiers for chance-constrained programs"};
  app.require_subcommand(1);

  std::string config_path, out_dir, mode = "frontier";
  std::uint64_t seed = 1;
  int replicates = 1;
  double alpha_target = 0.0;

  CLI::App* run = app.add_subcommand("run", "solve and write results");
  run->add_option("--config", config_path, "JSON config file");
  run->add_option("--seed", seed, "master seed");
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--replicates", replicates, "independent replicates")
      ->check(CLI::Range(1, 10000));
  run->add_option("--mode", mode, "frontier | fixed-risk")
      ->check(CLI::IsMember({"frontier", "fixed-risk"}));
  run->add_option("--alpha", alpha_target, "target risk (fixed-risk mode)");

  std::string report_dir;
  CLI::App* report = app.add_subcommand("report", "summarize a run directory");
  report->add_option("--out", report_dir, "run directory")->required();

  std::vector<std::string> argv_s;
  argv_s.reserve(args.size() + 1);
  argv_s.push_back("ccfront");
  argv_s.insert(argv_s.end(), args.begin(), args.end());
  std::vector<char*> argv;
  argv.reserve(argv_s.size());
  for (std::string& s : argv_s) argv.push_back(s.data());

  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    return fail(2, "usage", e.what());
  }

  try {
    if (run->parsed()) return cmd_run(config_path, seed, out_dir, replicates, mode, alpha_target);
    return cmd_report(report_dir);
  } catch (const config_error& e) {
    return fail(2, "config", e.what());
  } catch (const infeasible_level& e) {
    return fail(1, "infeasible", e.what());
  } catch (const init_failure& e) {
    return fail(1, "init", e.what());
  } catch (const std::exception& e) {
    return fail(1, "runtime", e.what());
  }
}

}  // namespace cli
}  // namespace ccfront
