#pragma once

// Config (de)serialization and result writers. All floating-point output
// goes through one %.17g formatter so equal-seed runs are byte-identical.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ccfront/config.hpp"
#include "ccfront/errors.hpp"
#include "ccfront/frontier.hpp"

namespace ccfront {
namespace io {

using json = nlohmann::json;

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

// ---- config parsing ----

namespace detail {

inline void reject_unknown(const json& j, const std::string& where,
                           std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw config_error("'" + where + "' must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed)
      if (it.key() == a) {
        ok = true;
        break;
      }
    if (!ok) throw config_error("unknown key '" + where + "." + it.key() + "'");
  }
}

inline void get_to(const json& j, const std::string& where, const char* key, double& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_number()) throw config_error("'" + where + "." + key + "' must be a number");
  out = v.get<double>();
}

inline void get_to(const json& j, const std::string& where, const char* key, int& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_number_integer())
    throw config_error("'" + where + "." + key + "' must be an integer");
  out = v.get<int>();
}

inline void get_to(const json& j, const std::string& where, const char* key, bool& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_boolean()) throw config_error("'" + where + "." + key + "' must be a boolean");
  out = v.get<bool>();
}

inline void get_to(const json& j, const std::string& where, const char* key, std::string& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_string()) throw config_error("'" + where + "." + key + "' must be a string");
  out = v.get<std::string>();
}

}  // namespace detail

inline RunConfig parse_config(const json& j) {
  RunConfig c;
  detail::reject_unknown(j, "config",
                         {"problem", "solver", "mc", "frontier", "init", "bisect", "report"});
  if (j.contains("problem")) {
    const json& s = j.at("problem");
    detail::reject_unknown(s, "problem", {"name", "n_stocks", "threshold", "n", "m", "U"});
    detail::get_to(s, "problem", "name", c.problem.name);
    detail::get_to(s, "problem", "n_stocks", c.problem.n_stocks);
    detail::get_to(s, "problem", "threshold", c.problem.threshold);
    detail::get_to(s, "problem", "n", c.problem.n);
    detail::get_to(s, "problem", "m", c.problem.m);
    detail::get_to(s, "problem", "U", c.problem.U);
  }
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    detail::reject_unknown(
        s, "solver",
        {"smoothing",  "batch_m",   "iters_max",   "runs_min",   "runs_max",    "stages",
         "tau_c",      "random_iters", "strict_theory", "scale_draws", "scale_tol", "scale_omega",
         "wc_pairs",   "var_points", "est_batch",  "r_frac",     "check_every", "term_checks",
         "delta1",     "delta2",    "gamma_incr",  "gamma_decr"});
    std::string kind = kind_name(c.smoothing);
    detail::get_to(s, "solver", "smoothing", kind);
    if (!kind_from_string(kind, c.smoothing))
      throw config_error("'solver.smoothing' must be sigmoid | cubic_under | cubic_over");
    detail::get_to(s, "solver", "batch_m", c.batch_m);
    detail::get_to(s, "solver", "iters_max", c.iters_max);
    detail::get_to(s, "solver", "runs_min", c.runs_min);
    detail::get_to(s, "solver", "runs_max", c.runs_max);
    detail::get_to(s, "solver", "stages", c.stages);
    detail::get_to(s, "solver", "tau_c", c.tau_c);
    detail::get_to(s, "solver", "random_iters", c.random_iters);
    detail::get_to(s, "solver", "strict_theory", c.strict_theory);
    detail::get_to(s, "solver", "scale_draws", c.scale_draws);
    detail::get_to(s, "solver", "scale_tol", c.scale_tol);
    detail::get_to(s, "solver", "scale_omega", c.scale_omega);
    detail::get_to(s, "solver", "wc_pairs", c.wc_pairs);
    detail::get_to(s, "solver", "var_points", c.var_points);
    detail::get_to(s, "solver", "est_batch", c.est_batch);
    detail::get_to(s, "solver", "r_frac", c.r_frac);
    detail::get_to(s, "solver", "check_every", c.check_every);
    detail::get_to(s, "solver", "term_checks", c.term_checks);
    detail::get_to(s, "solver", "delta1", c.delta1);
    detail::get_to(s, "solver", "delta2", c.delta2);
    detail::get_to(s, "solver", "gamma_incr", c.gamma_incr);
    detail::get_to(s, "solver", "gamma_decr", c.gamma_decr);
  }
  if (j.contains("mc")) {
    const json& s = j.at("mc");
    detail::reject_unknown(s, "mc", {"n_mc", "delta"});
    detail::get_to(s, "mc", "n_mc", c.n_mc);
    detail::get_to(s, "mc", "delta", c.delta);
  }
  if (j.contains("frontier")) {
    const json& s = j.at("frontier");
    detail::reject_unknown(s, "frontier",
                           {"nu_spacing_frac", "alpha_low", "max_points", "nu0_override",
                            "nu_spacing_abs"});
    detail::get_to(s, "frontier", "nu_spacing_frac", c.nu_spacing_frac);
    detail::get_to(s, "frontier", "alpha_low", c.alpha_low);
    detail::get_to(s, "frontier", "max_points", c.max_points);
    detail::get_to(s, "frontier", "nu0_override", c.nu0_override);
    detail::get_to(s, "frontier", "nu_spacing_abs", c.nu_spacing_abs);
  }
  if (j.contains("init")) {
    const json& s = j.at("init");
    detail::reject_unknown(s, "init", {"scenarios", "iters", "rho0"});
    detail::get_to(s, "init", "scenarios", c.init_scenarios);
    detail::get_to(s, "init", "iters", c.init_iters);
    detail::get_to(s, "init", "rho0", c.init_rho0);
  }
  if (j.contains("bisect")) {
    const json& s = j.at("bisect");
    detail::reject_unknown(s, "bisect", {"nu_tol"});
    detail::get_to(s, "bisect", "nu_tol", c.nu_tol);
  }
  if (j.contains("report")) {
    const json& s = j.at("report");
    detail::reject_unknown(s, "report", {"record_wall_time"});
    detail::get_to(s, "report", "record_wall_time", c.record_wall_time);
  }
  const std::vector<std::string> bad = validate(c);
  if (!bad.empty()) {
    std::string msg = "invalid config:";
    for (const std::string& b : bad) msg += " " + b + ";";
    throw config_error(msg);
  }
  return c;
}

inline RunConfig parse_config_file(const std::string& path) {
  json j;
  try {
    j = json::parse(slurp(path));
  } catch (const json::exception& e) {
    throw config_error(std::string("config parse: ") + e.what());
  }
  return parse_config(j);
}

inline json config_to_json(const RunConfig& c) {
  json j;
  j["problem"] = {{"name", c.problem.name}, {"n_stocks", c.problem.n_stocks},
                  {"threshold", c.problem.threshold}, {"n", c.problem.n},
                  {"m", c.problem.m},       {"U", c.problem.U}};
  j["solver"] = {{"smoothing", kind_name(c.smoothing)},
                 {"batch_m", c.batch_m},
                 {"iters_max", c.iters_max},
                 {"runs_min", c.runs_min},
                 {"runs_max", c.runs_max},
                 {"stages", c.stages},
                 {"tau_c", c.tau_c},
                 {"random_iters", c.random_iters},
                 {"strict_theory", c.strict_theory},
                 {"scale_draws", c.scale_draws},
                 {"scale_tol", c.scale_tol},
                 {"scale_omega", c.scale_omega},
                 {"wc_pairs", c.wc_pairs},
                 {"var_points", c.var_points},
                 {"est_batch", c.est_batch},
                 {"r_frac", c.r_frac},
                 {"check_every", c.check_every},
                 {"term_checks", c.term_checks},
                 {"delta1", c.delta1},
                 {"delta2", c.delta2},
                 {"gamma_incr", c.gamma_incr},
                 {"gamma_decr", c.gamma_decr}};
  j["mc"] = {{"n_mc", c.n_mc}, {"delta", c.delta}};
  j["frontier"] = {{"nu_spacing_frac", c.nu_spacing_frac},
                   {"alpha_low", c.alpha_low},
                   {"max_points", c.max_points}};
  if (!std::isnan(c.nu0_override)) j["frontier"]["nu0_override"] = c.nu0_override;
  if (!std::isnan(c.nu_spacing_abs)) j["frontier"]["nu_spacing_abs"] = c.nu_spacing_abs;
  j["init"] = {{"scenarios", c.init_scenarios}, {"iters", c.init_iters}, {"rho0", c.init_rho0}};
  j["bisect"] = {{"nu_tol", c.nu_tol}};
  j["report"] = {{"record_wall_time", c.record_wall_time}};
  return j;
}

// ---- result writers ----

inline std::string frontier_csv(const std::vector<FrontierPoint>& pts) {
  std::ostringstream out;
  out << "index,nu,alpha_point,alpha_upper,time_s\n";
  for (const FrontierPoint& p : pts)
    out << p.index << ',' << fmt17(p.nu_native) << ',' << fmt17(p.alpha_point) << ','
        << fmt17(p.alpha_upper) << ',' << fmt17(p.time_s) << '\n';
  return out.str();
}

inline json point_to_json(const FrontierPoint& p) {
  json stages_j = json::array();
  for (const StageRecord& s : p.stages) {
    json sr = json::array();
    for (const RunRecord& r : s.runs)
      sr.push_back({{"iters", r.iters}, {"alpha_bar", r.alpha_bar}, {"gamma", r.gamma}});
    stages_j.push_back({{"stage", s.stage},
                        {"gamma_init", s.gamma_init},
                        {"stopped_early", s.stopped_early},
                        {"runs", sr}});
  }
  return json{{"index", p.index},
              {"nu", p.nu},
              {"nu_native", p.nu_native},
              {"alpha_point", p.alpha_point},
              {"alpha_upper", p.alpha_upper},
              {"violations", p.violations},
              {"n_cert", p.n_cert},
              {"alpha_inrun", p.alpha_inrun},
              {"early_exit", p.early_exit},
              {"envelope_replaced", p.envelope_replaced},
              {"time_s", p.time_s},
              {"x", p.x},
              {"tau_base", p.tau_base},
              {"stages", stages_j}};
}

inline std::string frontier_diagnostics(const FrontierResult& res) {
  std::ostringstream out;
  out << "initializer: nu0=" << fmt17(res.init.nu0) << " rho=" << fmt17(res.init.rho)
      << " rounds=" << res.init.rounds << "\n";
  out << "sweep: nu0=" << fmt17(res.nu0) << " spacing=" << fmt17(res.nu_spacing)
      << " n_inrun=" << res.n_inrun << "\n";
  out << "step: gamma1=" << fmt17(res.step.gamma1) << " rho_hat=" << fmt17(res.step.rho)
      << " sigma2_hat=" << fmt17(res.step.sigma2)
      << (res.step.rho_floored ? " [rho floored]" : "")
      << (res.step.sigma_floored ? " [sigma floored]" : "") << "\n";
  for (const FrontierPoint& p : res.points) {
    out << "point " << p.index << ": nu=" << fmt17(p.nu_native)
        << " alpha=" << fmt17(p.alpha_point) << " upper=" << fmt17(p.alpha_upper) << " ("
        << p.violations << "/" << p.n_cert << ")";
    if (p.envelope_replaced) out << " [envelope]";
    if (p.early_exit) out << " [early exit]";
    out << "\n";
  }
  out << "stop: " << res.stop_reason << "\n";
  return out.str();
}

// ---- readers (report command) ----

struct FrontierRow {
  int index = 0;
  double nu = 0.0, alpha_point = 0.0, alpha_upper = 0.0, time_s = 0.0;
};

inline std::vector<FrontierRow> read_frontier_csv(const std::string& path) {
  std::istringstream in(slurp(path));
  std::string line;
  if (!std::getline(in, line) || line != "index,nu,alpha_point,alpha_upper,time_s")
    throw config_error("'" + path + "': not a frontier csv");
  std::vector<FrontierRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    FrontierRow r;
    char c;
    std::istringstream ls(line);
    if (!(ls >> r.index >> c >> r.nu >> c >> r.alpha_point >> c >> r.alpha_upper >> c >>
          r.time_s))
      throw config_error("'" + path + "': bad row '" + line + "'");
    rows.push_back(r);
  }
  return rows;
}

}  // namespace io
}  // namespace ccfront
