#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>

#include "vsg/json_io.hpp"
#include "vsg/recipes.hpp"

namespace vsg::cli {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& msg) { throw ConfigError(path + ": " + msg); }

void only_keys(const json& j, const std::set<std::string>& keys, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  for (const auto& [k, v] : j.items()) {
    if (!keys.count(k)) bad(path + "." + k, "unknown field");
  }
}

double num(const json& j, const std::string& key, double def, const std::string& path) {
  if (!j.contains(key)) return def;
  const auto& v = j[key];
  if (!v.is_number() || !std::isfinite(v.get<double>())) bad(path + "." + key, "expected a finite number");
  return v.get<double>();
}

std::size_t count(const json& j, const std::string& key, std::size_t def, const std::string& path) {
  if (!j.contains(key)) return def;
  const auto& v = j[key];
  if (!v.is_number_unsigned()) bad(path + "." + key, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

Analysis analysis_from_json(const json& j, const std::string& path) {
  only_keys(j,
            {"horizon", "dt", "t0", "x0", "seed", "samples", "radius", "tol_impl", "grid", "table", "tol_tail",
             "tail_fraction", "tol_gain", "max_steps", "tol_conv"},
            path);
  Analysis a;
  a.horizon = num(j, "horizon", a.horizon, path);
  a.dt = num(j, "dt", a.dt, path);
  a.t0 = num(j, "t0", a.t0, path);
  if (j.contains("x0")) {
    const auto& x = j["x0"];
    if (!x.is_array()) bad(path + ".x0", "expected an array of numbers");
    std::vector<double> v;
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (!x[k].is_number()) bad(path + ".x0[" + std::to_string(k) + "]", "expected a number");
      v.push_back(x[k].get<double>());
    }
    a.x0 = std::move(v);
  }
  a.seed = count(j, "seed", a.seed, path);
  a.samples = count(j, "samples", a.samples, path);
  a.radius = num(j, "radius", a.radius, path);
  a.tol_impl = num(j, "tol_impl", a.tol_impl, path);
  if (j.contains("grid")) a.grid = json_io::grid_from_json(j["grid"], path + ".grid");
  if (j.contains("table")) a.table = json_io::grid_from_json(j["table"], path + ".table");
  a.tol_tail = num(j, "tol_tail", a.tol_tail, path);
  a.tail_fraction = num(j, "tail_fraction", a.tail_fraction, path);
  a.tol_gain = num(j, "tol_gain", a.tol_gain, path);
  a.max_steps = count(j, "max_steps", a.max_steps, path);
  a.tol_conv = num(j, "tol_conv", a.tol_conv, path);
  return a;
}

json analysis_to_json(const Analysis& a) {
  json j{{"horizon", a.horizon},     {"dt", a.dt},
         {"t0", a.t0},               {"seed", a.seed},
         {"samples", a.samples},     {"radius", a.radius},
         {"tol_impl", a.tol_impl},   {"grid", json_io::to_json(a.grid)},
         {"table", json_io::to_json(a.table)}, {"tol_tail", a.tol_tail},
         {"tail_fraction", a.tail_fraction}, {"tol_gain", a.tol_gain},
         {"max_steps", a.max_steps}, {"tol_conv", a.tol_conv}};
  if (a.x0) j["x0"] = *a.x0;
  return j;
}

template <class T>
const T& require(const std::optional<T>& v, const char* section, const char* command) {
  if (!v) throw ConfigError(std::string("$: command '") + command + "' needs a '" + section + "' section");
  return *v;
}

const std::vector<double>& require_x0(const Config& cfg, const char* command) {
  if (!cfg.analysis.x0) throw ConfigError(std::string("$.analysis: command '") + command + "' needs 'x0'");
  return *cfg.analysis.x0;
}

Trajectory simulate(const SystemSpec& spec, const Analysis& a, const std::vector<double>& x0) {
  switch (spec.kind) {
    case SystemKind::Ode:
      return integrate_ode(spec, x0, a.horizon, a.dt, a.t0);
    case SystemKind::Delay:
      return integrate_delay(spec, constant_history(x0), a.horizon, a.dt, a.t0);
    case SystemKind::SampledData:
      return integrate_sampled(spec, x0, a.horizon, a.dt, a.t0);
  }
  throw ConfigError("unknown system kind");
}

void write_common(const Config& cfg, const OutputDir& out, const std::string& command, const json& report) {
  out.write_json("effective_config.json", cfg.effective());
  json r = report;
  r["command"] = command;
  out.write_json("report.json", r);
}

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.resize(w, ' ');
  return s;
}

std::string num_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

json Config::effective() const {
  json j{{"analysis", analysis_to_json(analysis)}};
  if (system) j["system"] = json_io::to_json(*system);
  if (gains) j["gains"] = json_io::to_json(*gains);
  if (synthesis) j["synthesis"] = json_io::to_json(*synthesis);
  if (lyapunov) j["lyapunov"] = json_io::to_json(*lyapunov);
  return j;
}

Config load_config(const std::string& path) {
  const json j = json_io::load_file(path);
  only_keys(j, {"system", "gains", "synthesis", "lyapunov", "analysis"}, "$");
  Config cfg;
  if (j.contains("analysis")) cfg.analysis = analysis_from_json(j["analysis"], "$.analysis");
  if (j.contains("system")) cfg.system = json_io::system_from_json(j["system"], "$.system");
  if (j.contains("gains")) cfg.gains = json_io::matrix_from_json(j["gains"], "$.gains");
  if (j.contains("synthesis")) {
    if (!cfg.gains) bad("$.synthesis", "needs the top-level 'gains' section");
    cfg.synthesis = json_io::synthesis_from_json(j["synthesis"], *cfg.gains, "$.synthesis");
  }
  if (j.contains("lyapunov")) {
    cfg.lyapunov = json_io::lyapunov_from_json(j["lyapunov"], cfg.gains ? *cfg.gains : GainMatrix(1), "$.lyapunov");
    if (cfg.system) {
      try {
        cfg.lyapunov->validate(cfg.system->model->dim());
      } catch (const std::invalid_argument& e) {
        bad("$.lyapunov", e.what());
      }
    }
  }
  return cfg;
}

// ---------------------------------------------------------------------------

int cmd_check_sg(const Config& cfg, const OutputDir& out) {
  const auto& G = require(cfg.gains, "gains", "check-sg");
  out.claim({"report.json", "effective_config.json"});
  const auto rep = check_small_gain(G, cfg.analysis.grid);
  json report{{"small_gain", json_io::to_json(rep)}, {"verdict", rep.holds ? "holds" : "fails"}};

  std::cout << pad("cycle", 16) << pad("status", 16) << "detail\n";
  for (const auto& c : rep.cycles) {
    const std::string status = c.skipped_zero ? "zero" : to_string(c.verdict->status);
    std::cout << pad(cycle_to_string(c.cycle), 16) << pad(status, 16) << (c.verdict ? c.verdict->detail : "") << "\n";
  }
  if (!rep.holds) {
    WitnessSearchOptions wo;
    wo.seed = cfg.analysis.seed;
    if (auto w = gas_witness_search(G, wo, cfg.analysis.grid)) report["gas_witness"] = w->values();
    std::cout << "small-gain condition fails on cycle " << cycle_to_string(rep.failing_cycle->cycle)
              << " (witness s = " << num_text(rep.failing_cycle->witness) << ")\n";
  } else {
    std::cout << "small-gain condition holds" << (rep.exact ? " (exact)" : " (grid)") << "\n";
  }
  write_common(cfg, out, "check-sg", report);
  return rep.holds ? kExitPositive : kExitNegative;
}

int cmd_synth(const Config& cfg, const OutputDir& out) {
  const auto& inp = require(cfg.synthesis, "synthesis", "synth");
  out.claim({"report.json", "effective_config.json", "gain_table.csv"});
  CompositeGain cg;
  try {
    cg = overall_gain(inp, cfg.analysis.grid);
  } catch (const SmallGainNotEstablished& e) {
    write_common(cfg, out, "synth",
                 {{"verdict", "small_gain_fails"}, {"small_gain", json_io::to_json(e.report())}});
    std::cout << e.what() << "\n";
    return kExitNegative;
  }
  json phi = json::array(), gmap = json::array();
  for (const auto& g : cg.phi) phi.push_back(json_io::to_json(g));
  for (const auto& g : cg.gmap) gmap.push_back(json_io::to_json(g));
  std::ostringstream csv;
  csv << "s,theta,overall\n";
  std::cout << pad("s", 16) << pad("theta(s)", 16) << "overall(s)\n";
  for (double s : cfg.analysis.table.samples()) {
    const double th = cg.theta(s);
    const double ov = cg.overall(s);
    csv << csv_number(s) << "," << csv_number(th) << "," << csv_number(ov) << "\n";
    std::cout << pad(num_text(s), 16) << pad(num_text(th), 16) << num_text(ov) << "\n";
  }
  write_common(cfg, out, "synth",
               {{"verdict", "synthesized"},
                {"phi", phi},
                {"theta", json_io::to_json(cg.theta)},
                {"a1", json_io::to_json(cg.a1)},
                {"pu", json_io::to_json(cg.pu)},
                {"gmap", gmap}});
  out.write_text("gain_table.csv", csv.str());
  return kExitPositive;
}

int cmd_iterate(const Config& cfg, const OutputDir& out) {
  const auto& G = require(cfg.gains, "gains", "iterate");
  const auto& x0 = require_x0(cfg, "iterate");
  out.claim({"report.json", "effective_config.json", "iterates.csv"});
  IterationResult res;
  try {
    res = iterate(G, PlusVec(x0), cfg.analysis.max_steps, cfg.analysis.tol_conv);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("$.analysis.x0: ") + e.what());
  }
  std::ostringstream csv;
  csv << "k";
  for (std::size_t i = 0; i < G.n(); ++i) csv << ",x" << i + 1;
  csv << "\n";
  for (std::size_t k = 0; k < res.iterates.size(); ++k) {
    csv << k;
    for (double v : res.iterates[k].values()) csv << "," << csv_number(v);
    csv << "\n";
  }
  std::cout << "status " << to_string(res.status) << " after " << res.steps << " steps, final norm "
            << num_text(res.final_norm) << "\n";
  write_common(cfg, out, "iterate", {{"iteration", json_io::to_json(res)}});
  out.write_text("iterates.csv", csv.str());
  return res.status == IterationStatus::ConvergedToZero ? kExitPositive : kExitNegative;
}

int cmd_simulate(const Config& cfg, const OutputDir& out) {
  const auto& spec = require(cfg.system, "system", "simulate");
  const auto& x0 = require_x0(cfg, "simulate");
  std::vector<std::string> files{"report.json", "effective_config.json", "trajectory.csv"};
  if (spec.kind == SystemKind::SampledData) files.push_back("sampling_times.csv");
  out.claim(files);
  try {
    const auto traj = simulate(spec, cfg.analysis, x0);
    double peak = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) peak = std::max(peak, traj.max_norm(k));
    write_common(cfg, out, "simulate",
                 {{"verdict", "completed"},
                  {"steps", traj.size() - 1},
                  {"final_time", traj.times.back()},
                  {"final_state", traj.final_state()},
                  {"max_norm", peak},
                  {"sampling_times", traj.sampling_times.size()}});
    out.write_trajectory("trajectory.csv", traj);
    if (spec.kind == SystemKind::SampledData) out.write_times("sampling_times.csv", traj.sampling_times);
    std::cout << "simulated " << traj.size() - 1 << " steps to t = " << num_text(traj.times.back())
              << ", final max-norm " << num_text(traj.max_norm(traj.size() - 1)) << "\n";
    return kExitPositive;
  } catch (const FiniteEscapeError& e) {
    write_common(cfg, out, "simulate",
                 {{"verdict", "finite_escape"}, {"escape_time", e.time()}, {"state", e.state()}});
    std::cout << e.what() << "\n";
    return kExitNegative;
  }
}

int cmd_validate(const Config& cfg, const OutputDir& out, const RunFlags& flags) {
  const auto& spec = require(cfg.system, "system", "validate");
  out.claim({"report.json", "effective_config.json", "trajectory.csv"});
  json report;
  bool positive = true;
  std::cout << pad("check", 24) << pad("verdict", 16) << "detail\n";

  if (cfg.lyapunov) {
    ImplicationOptions io;
    io.samples = cfg.analysis.samples;
    io.radius = cfg.analysis.radius;
    io.seed = flags.seed.value_or(cfg.analysis.seed);
    io.tol = cfg.analysis.tol_impl;
    const auto rep = check_implication(*cfg.lyapunov, spec, io);
    report["implication"] = json_io::to_json(rep);
    positive = positive && !rep.falsified();
    std::cout << pad("implication", 24) << pad(rep.falsified() ? "falsified" : "not falsified", 16)
              << rep.violation_count << " violations in " << rep.evaluations << " evaluations\n";
  }

  std::optional<Trajectory> traj;
  if (cfg.analysis.x0) {
    try {
      traj = simulate(spec, cfg.analysis, *cfg.analysis.x0);
    } catch (const FiniteEscapeError& e) {
      report["finite_escape"] = {{"time", e.time()}, {"state", e.state()}};
      positive = false;
      std::cout << pad("simulation", 24) << pad("escaped", 16) << e.what() << "\n";
    }
  }
  if (traj) {
    const double r = spec.model->max_delay();
    if (cfg.synthesis) {
      const auto cg = overall_gain(*cfg.synthesis, cfg.analysis.grid);
      const auto rep = check_asymptotic_gain(*traj, r, cg.gmap, spec.input_sup(), cfg.analysis.tol_gain,
                                             cfg.analysis.tol_tail, cfg.analysis.tail_fraction);
      report["asymptotic_gain"] = json_io::to_json(rep);
      positive = positive && rep.all_satisfied();
      for (std::size_t i = 0; i < rep.channels.size(); ++i)
        std::cout << pad("asymptotic gain V" + std::to_string(i + 1), 24)
                  << pad(rep.channels[i].satisfied ? "satisfied" : "violated", 16) << "tail sup "
                  << num_text(rep.channels[i].tail_sup) << " vs bound " << num_text(rep.channels[i].bound) << "\n";
    } else {
      const auto rep = check_convergence(*traj, r, cfg.analysis.tol_tail, cfg.analysis.tail_fraction);
      report["convergence"] = json_io::to_json(rep);
      positive = positive && rep.all_converged();
      for (std::size_t i = 0; i < rep.channels.size(); ++i)
        std::cout << pad("convergence V" + std::to_string(i + 1), 24)
                  << pad(rep.channels[i].converged ? "converged" : "not converged", 16) << "tail sup "
                  << num_text(rep.channels[i].tail_sup) << " over [" << num_text(rep.tail_start) << ", "
                  << num_text(rep.horizon_end) << "]\n";
    }
  }
  if (!cfg.lyapunov && !cfg.analysis.x0)
    throw ConfigError("$: command 'validate' needs a 'lyapunov' section or 'analysis.x0'");
  report["verdict"] = positive ? "positive" : "negative";
  write_common(cfg, out, "validate", report);
  if (traj) out.write_trajectory("trajectory.csv", *traj);
  return positive ? kExitPositive : kExitNegative;
}

int cmd_repro(const std::string& name, const OutputDir& out, const RunFlags& flags) {
  const auto& names = recipe_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
    throw ConfigError("unknown recipe '" + name + "'; available: " + list);
  }
  out.claim({"report.json", "effective_config.json", "trajectory.csv"});
  RecipeOptions ro;
  ro.seed = flags.seed.value_or(0);
  ro.jobs = flags.jobs;
  auto rep = run_recipe(name, ro);
  for (const auto& line : rep.summary) std::cout << line << "\n";
  std::cout << name << ": " << (rep.passed ? "PASS" : "FAIL") << "\n";
  out.write_json("effective_config.json", {{"recipe", name}, {"seed", ro.seed}});
  out.write_json("report.json",
                 {{"command", "repro"}, {"recipe", name}, {"passed", rep.passed}, {"details", rep.details}});
  if (rep.trajectory) out.write_trajectory("trajectory.csv", *rep.trajectory);
  return rep.passed ? kExitPositive : kExitNegative;
}

}  // namespace vsg::cli
