#include "vsg/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "vsg/biochem.hpp"

namespace vsg::json_io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ConfigError(path + ": " + msg); }

std::string at(const std::string& path, const std::string& key) { return path + "." + key; }
std::string at(const std::string& path, std::size_t k) { return path + "[" + std::to_string(k) + "]"; }

const json& object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  return j;
}

const json& field(const json& j, const std::string& key, const std::string& path) {
  object(j, path);
  const auto it = j.find(key);
  if (it == j.end()) fail(path, "missing field '" + key + "'");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

double number(const json& j, const std::string& key, const std::string& path) {
  return number(field(j, key, path), at(path, key));
}

double number_or(const json& j, const std::string& key, double def, const std::string& path) {
  return j.contains(key) ? number(j, key, path) : def;
}

std::size_t index(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

std::string text(const json& j, const std::string& key, const std::string& path) {
  const auto& v = field(j, key, path);
  if (!v.is_string()) fail(at(path, key), "expected a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(number(j[k], at(path, k)));
  return out;
}

Matrix matrix(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of rows");
  Matrix out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(numbers(j[k], at(path, k)));
  return out;
}

// Library constructors validate with std::invalid_argument; rethrow with the path.
template <class F>
auto guarded(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

json values(const std::vector<double>& v) { return json(v); }

}  // namespace

// ---------------------------------------------------------------------------
// gains

json to_json(const GainFn& g) {
  switch (g.kind()) {
    case GainKind::Zero:
      return {{"kind", "zero"}};
    case GainKind::Linear:
      return {{"kind", "linear"}, {"k", g.k()}};
    case GainKind::Power:
      return {{"kind", "power"}, {"k", g.k()}, {"p", g.p()}};
    case GainKind::LogExpSq:
      return {{"kind", "logexpsq"}, {"c", g.c()}, {"th", g.th()}};
    case GainKind::Max: {
      json args = json::array();
      for (const auto& c : g.children()) args.push_back(to_json(c));
      return {{"kind", "max"}, {"args", args}};
    }
    case GainKind::Compose:
      return {{"kind", "compose"}, {"outer", to_json(g.children()[0])}, {"inner", to_json(g.children()[1])}};
    case GainKind::Scale:
      return {{"kind", "scale"}, {"k", g.k()}, {"fn", to_json(g.children()[0])}};
  }
  return {};
}

GainFn gain_from_json(const json& j, const std::string& path) {
  const std::string kind = text(j, "kind", path);
  return guarded(path, [&]() -> GainFn {
    if (kind == "zero") return GainFn::zero();
    if (kind == "linear") return GainFn::linear(number(j, "k", path));
    if (kind == "power") return GainFn::power(number(j, "k", path), number(j, "p", path));
    if (kind == "logexpsq") return GainFn::logexpsq(number(j, "c", path), number(j, "th", path));
    if (kind == "max") {
      const auto& a = field(j, "args", path);
      if (!a.is_array()) fail(at(path, "args"), "expected an array");
      std::vector<GainFn> args;
      for (std::size_t k = 0; k < a.size(); ++k) args.push_back(gain_from_json(a[k], at(at(path, "args"), k)));
      return GainFn::max_of(std::move(args));
    }
    if (kind == "compose")
      return GainFn::compose(gain_from_json(field(j, "outer", path), at(path, "outer")),
                             gain_from_json(field(j, "inner", path), at(path, "inner")));
    if (kind == "scale") return GainFn::scale(number(j, "k", path), gain_from_json(field(j, "fn", path), at(path, "fn")));
    fail(at(path, "kind"), "unknown gain kind '" + kind + "'");
  });
}

json to_json(const GainMatrix& G) {
  json entries = json::array();
  for (std::size_t i = 0; i < G.n(); ++i)
    for (std::size_t j = 0; j < G.n(); ++j)
      if (!G.at(i, j).is_zero()) entries.push_back({{"i", i + 1}, {"j", j + 1}, {"fn", to_json(G.at(i, j))}});
  return {{"n", G.n()}, {"gains", entries}};
}

GainMatrix matrix_from_json(const json& j, const std::string& path) {
  const std::size_t n = index(field(j, "n", path), at(path, "n"));
  if (n == 0) fail(at(path, "n"), "must be >= 1");
  GainMatrix G(n);
  if (!j.contains("gains")) return G;
  const auto& gs = j["gains"];
  const auto gpath = at(path, "gains");
  if (!gs.is_array()) fail(gpath, "expected an array");
  std::vector<bool> seen(n * n, false);
  for (std::size_t k = 0; k < gs.size(); ++k) {
    const auto p = at(gpath, k);
    const std::size_t i = index(field(gs[k], "i", p), at(p, "i"));
    const std::size_t jj = index(field(gs[k], "j", p), at(p, "j"));
    if (i < 1 || i > n) fail(at(p, "i"), "index out of range 1.." + std::to_string(n));
    if (jj < 1 || jj > n) fail(at(p, "j"), "index out of range 1.." + std::to_string(n));
    if (seen[(i - 1) * n + jj - 1]) fail(p, "duplicate entry");
    seen[(i - 1) * n + jj - 1] = true;
    G.set(i - 1, jj - 1, gain_from_json(field(gs[k], "fn", p), at(p, "fn")));
  }
  return G;
}

SynthesisInput synthesis_from_json(const json& j, GainMatrix gains, const std::string& path) {
  object(j, path);
  SynthesisInput inp;
  inp.gains = std::move(gains);
  inp.zeta = gain_from_json(field(j, "zeta", path), at(path, "zeta"));
  if (j.contains("p")) {
    const auto& p = j["p"];
    if (!p.is_array()) fail(at(path, "p"), "expected an array");
    for (std::size_t k = 0; k < p.size(); ++k) inp.p.push_back(gain_from_json(p[k], at(at(path, "p"), k)));
  }
  if (j.contains("a1")) inp.a1 = gain_from_json(j["a1"], at(path, "a1"));
  inp.M = number_or(j, "M", 1.0, path);
  guarded(path, [&] {
    inp.validate();
    return 0;
  });
  return inp;
}

json to_json(const SynthesisInput& inp) {
  json p = json::array();
  for (const auto& g : inp.p) p.push_back(to_json(g));
  return {{"zeta", to_json(inp.zeta)}, {"p", p}, {"a1", to_json(inp.a1)}, {"M", inp.M}};
}

// ---------------------------------------------------------------------------
// signals and models

json to_json(const Signal& s) {
  const auto& p = s.params();
  switch (s.kind()) {
    case SignalKind::Zero:
      return {{"kind", "zero"}};
    case SignalKind::Constant:
      return {{"kind", "constant"}, {"value", p[0]}};
    case SignalKind::PiecewiseConstant:
      return {{"kind", "piecewise_constant"}, {"breaks", values(s.breaks())}, {"values", values(s.values())}};
    case SignalKind::Sinusoid:
      return {{"kind", "sinusoid"}, {"amplitude", p[0]}, {"omega", p[1]}, {"phase", p[2]}, {"offset", p[3]}};
    case SignalKind::Square:
      return {{"kind", "square"}, {"amplitude", p[0]}, {"period", p[1]}, {"offset", p[2]}};
    case SignalKind::Noise:
      return {{"kind", "noise"}, {"amplitude", p[0]}, {"hold", p[1]}, {"seed", s.seed()}, {"offset", p[2]}};
  }
  return {};
}

Signal signal_from_json(const json& j, const std::string& path) {
  const std::string kind = text(j, "kind", path);
  return guarded(path, [&]() -> Signal {
    if (kind == "zero") return Signal::zero();
    if (kind == "constant") return Signal::constant(number(j, "value", path));
    if (kind == "piecewise_constant")
      return Signal::piecewise_constant(numbers(field(j, "breaks", path), at(path, "breaks")),
                                        numbers(field(j, "values", path), at(path, "values")));
    if (kind == "sinusoid")
      return Signal::sinusoid(number(j, "amplitude", path), number(j, "omega", path), number_or(j, "phase", 0.0, path),
                              number_or(j, "offset", 0.0, path));
    if (kind == "square")
      return Signal::square(number(j, "amplitude", path), number(j, "period", path), number_or(j, "offset", 0.0, path));
    if (kind == "noise") {
      const auto& sd = field(j, "seed", path);
      if (!sd.is_number_unsigned()) fail(at(path, "seed"), "expected a nonnegative integer");
      return Signal::noise(number(j, "amplitude", path), number(j, "hold", path), sd.get<std::uint64_t>(),
                           number_or(j, "offset", 0.0, path));
    }
    fail(at(path, "kind"), "unknown signal kind '" + kind + "'");
  });
}

json to_json(const GCurve& g) {
  if (g.kind() == GCurve::Kind::Hill) return {{"kind", "hill"}, {"scale", g.scale()}, {"p", g.p()}};
  return {{"kind", "table"}, {"xs", values(g.xs())}, {"gs", values(g.gs())}};
}

GCurve gcurve_from_json(const json& j, const std::string& path) {
  const std::string kind = text(j, "kind", path);
  return guarded(path, [&]() -> GCurve {
    if (kind == "hill") return GCurve::hill(number_or(j, "scale", 1.0, path), number(j, "p", path));
    if (kind == "table")
      return GCurve::table(numbers(field(j, "xs", path), at(path, "xs")), numbers(field(j, "gs", path), at(path, "gs")));
    fail(at(path, "kind"), "unknown g curve kind '" + kind + "'");
  });
}

std::shared_ptr<const Model> model_from_json(const json& j, const std::string& path) {
  const std::string type = text(j, "type", path);
  auto mat = [&](const char* key) { return matrix(field(j, key, path), at(path, key)); };
  auto opt_mat = [&](const char* key) { return j.contains(key) ? matrix(j[key], at(path, key)) : Matrix{}; };
  auto vec = [&](const char* key) { return numbers(field(j, key, path), at(path, key)); };
  return guarded(path, [&]() -> std::shared_ptr<const Model> {
    if (type == "linear_ode") return std::make_shared<LinearOde>(mat("A"), opt_mat("B"));
    if (type == "sampled_linear") return std::make_shared<SampledLinear>(mat("A"), mat("H"), opt_mat("B"));
    if (type == "linear_delay_network") {
      auto coupling = LinearDelayNetwork::Coupling::Aligned;
      if (j.contains("coupling")) {
        const auto c = text(j, "coupling", path);
        if (c == "signal") coupling = LinearDelayNetwork::Coupling::Signal;
        else if (c == "signed") coupling = LinearDelayNetwork::Coupling::Signed;
        else if (c != "aligned") fail(at(path, "coupling"), "expected 'aligned', 'signal' or 'signed'");
      }
      return std::make_shared<LinearDelayNetwork>(vec("a"), mat("c"), number(j, "r", path), coupling);
    }
    if (type == "biochem_circuit" || type == "biochem_log") {
      auto a = vec("a");
      auto tau = vec("tau");
      auto g = gcurve_from_json(field(j, "g", path), at(path, "g"));
      if (type == "biochem_circuit") return std::make_shared<BiochemCircuit>(a, tau, g);
      std::vector<double> xstar;
      try {
        xstar = j.contains("xstar") ? vec("xstar") : biochem_equilibrium(a, g);
      } catch (const HypothesisError& e) {
        fail(path, e.what());
      }
      return std::make_shared<BiochemLog>(a, tau, g, xstar);
    }
    fail(at(path, "type"), "unknown model type '" + type + "'");
  });
}

json model_to_json(const Model& m) {
  if (auto p = dynamic_cast<const LinearOde*>(&m)) {
    json out{{"type", "linear_ode"}, {"A", p->A()}};
    if (!p->B().empty()) out["B"] = p->B();
    return out;
  }
  if (auto p = dynamic_cast<const SampledLinear*>(&m)) {
    json out{{"type", "sampled_linear"}, {"A", p->A()}, {"H", p->H()}};
    if (!p->B().empty()) out["B"] = p->B();
    return out;
  }
  if (auto p = dynamic_cast<const LinearDelayNetwork*>(&m))
    return {{"type", "linear_delay_network"}, {"a", p->a()}, {"c", p->c()}, {"r", p->r()},
            {"coupling", to_string(p->coupling())}};
  if (auto p = dynamic_cast<const BiochemCircuit*>(&m))
    return {{"type", "biochem_circuit"}, {"a", p->a()}, {"tau", p->tau()}, {"g", to_json(p->g())}};
  if (auto p = dynamic_cast<const BiochemLog*>(&m))
    return {{"type", "biochem_log"}, {"a", p->a()}, {"tau", p->tau()}, {"g", to_json(p->g())}, {"xstar", p->xstar()}};
  return {{"type", m.name()}};
}

namespace {

std::vector<Signal> signal_list(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) return {};
  const auto& v = j[key];
  if (v.is_object()) return {signal_from_json(v, at(path, key))};
  if (!v.is_array()) fail(at(path, key), "expected a signal or an array of signals");
  std::vector<Signal> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(signal_from_json(v[k], at(at(path, key), k)));
  return out;
}

json signal_list(const std::vector<Signal>& sigs) {
  json out = json::array();
  for (const auto& s : sigs) out.push_back(to_json(s));
  return out;
}

}  // namespace

SystemSpec system_from_json(const json& j, const std::string& path) {
  SystemSpec s;
  const std::string kind = text(j, "kind", path);
  if (kind == "ode") s.kind = SystemKind::Ode;
  else if (kind == "delay") s.kind = SystemKind::Delay;
  else if (kind == "sampled_data") s.kind = SystemKind::SampledData;
  else fail(at(path, "kind"), "expected 'ode', 'delay' or 'sampled_data'");
  s.model = model_from_json(field(j, "model", path), at(path, "model"));
  s.inputs = signal_list(j, "inputs", path);
  s.disturbances = signal_list(j, "disturbances", path);
  if (j.contains("h")) {
    const auto hp = at(path, "h");
    const auto& h = j["h"];
    const std::string hk = text(h, "kind", hp);
    s.h = guarded(hp, [&] {
      if (hk == "constant") return SamplingPeriod::constant(number(h, "h", hp));
      if (hk == "saturating")
        return SamplingPeriod::saturating(number(h, "h_min", hp), number(h, "h_max", hp), number(h, "kappa", hp));
      fail(at(hp, "kind"), "expected 'constant' or 'saturating'");
    });
  } else if (s.kind == SystemKind::SampledData) {
    fail(path, "missing field 'h' for a sampled_data system");
  }
  if (j.contains("dtilde")) s.dtilde = signal_from_json(j["dtilde"], at(path, "dtilde"));
  guarded(path, [&] {
    s.validate();
    return 0;
  });
  return s;
}

json to_json(const SystemSpec& s) {
  json out{{"kind", to_string(s.kind)},
           {"model", model_to_json(*s.model)},
           {"inputs", signal_list(s.inputs)},
           {"disturbances", signal_list(s.disturbances)}};
  if (s.kind == SystemKind::SampledData) {
    if (s.h.kind == SamplingPeriod::Kind::Constant)
      out["h"] = {{"kind", "constant"}, {"h", s.h.h_max}};
    else
      out["h"] = {{"kind", "saturating"}, {"h_min", s.h.h_min}, {"h_max", s.h.h_max}, {"kappa", s.h.kappa}};
    out["dtilde"] = to_json(s.dtilde);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lyapunov data

json to_json(const RateFn& r) {
  const auto& p = r.params();
  switch (r.kind()) {
    case RateFn::Kind::Gain:
      return to_json(r.gain_fn());
    case RateFn::Kind::BiochemFirst:
      return {{"kind", "biochem_first"}, {"a", p[0]}, {"lambda", p[1]}, {"theta", p[2]}, {"b", p[3]}};
    case RateFn::Kind::BiochemChain:
      return {{"kind", "biochem_chain"}, {"a", p[0]}, {"mu", p[1]}};
  }
  return {};
}

RateFn rate_from_json(const json& j, const std::string& path) {
  const std::string kind = text(j, "kind", path);
  if (kind == "biochem_first")
    return guarded(path, [&] {
      return RateFn::biochem_first(number(j, "a", path), number(j, "lambda", path), number(j, "theta", path),
                                   number(j, "b", path));
    });
  if (kind == "biochem_chain")
    return guarded(path, [&] { return RateFn::biochem_chain(number(j, "a", path), number(j, "mu", path)); });
  return RateFn::gain(gain_from_json(j, path));
}

LyapunovSetup lyapunov_from_json(const json& j, const GainMatrix& fallback, const std::string& path) {
  object(j, path);
  LyapunovSetup s;
  s.gains = j.contains("gains") ? matrix_from_json(j["gains"], at(path, "gains")) : fallback;
  const auto& rho = field(j, "rho", path);
  if (!rho.is_array()) fail(at(path, "rho"), "expected an array");
  for (std::size_t k = 0; k < rho.size(); ++k) s.rho.push_back(rate_from_json(rho[k], at(at(path, "rho"), k)));
  s.zeta = j.contains("zeta") ? gain_from_json(j["zeta"], at(path, "zeta")) : GainFn::zero();
  return s;
}

json to_json(const LyapunovSetup& s) {
  json rho = json::array();
  for (const auto& r : s.rho) rho.push_back(to_json(r));
  return {{"gains", to_json(s.gains)}, {"rho", rho}, {"zeta", to_json(s.zeta)}};
}

json to_json(const GridSpec& g) { return {{"s_min", g.s_min}, {"s_max", g.s_max}, {"points", g.points}}; }

GridSpec grid_from_json(const json& j, const std::string& path) {
  object(j, path);
  GridSpec g;
  g.s_min = number_or(j, "s_min", g.s_min, path);
  g.s_max = number_or(j, "s_max", g.s_max, path);
  if (j.contains("points")) g.points = index(j["points"], at(path, "points"));
  guarded(path, [&] {
    g.validate();
    return 0;
  });
  return g;
}

// ---------------------------------------------------------------------------
// reports

namespace {

json cycle_json(const Cycle& c) {
  json out = json::array();
  for (auto v : c) out.push_back(v + 1);
  return out;
}

}  // namespace

json to_json(const ContractionVerdict& v) {
  json out{{"status", to_string(v.status)}, {"holds", v.holds()}, {"detail", v.detail}};
  if (v.witness) out["witness"] = *v.witness;
  if (v.grid) out["grid"] = to_json(*v.grid);
  return out;
}

json to_json(const SmallGainReport& r) {
  json cycles = json::array();
  for (const auto& c : r.cycles) {
    json e{{"cycle", cycle_json(c.cycle)}, {"holds", c.holds()}, {"skipped_zero", c.skipped_zero}};
    if (c.verdict) e["verdict"] = to_json(*c.verdict);
    cycles.push_back(std::move(e));
  }
  json out{{"holds", r.holds}, {"exact", r.exact}, {"cycles", cycles}};
  if (r.failing_cycle)
    out["failing_cycle"] = {{"cycle", cycle_json(r.failing_cycle->cycle)}, {"witness", r.failing_cycle->witness}};
  return out;
}

json to_json(const IterationResult& r) {
  return {{"status", to_string(r.status)}, {"steps", r.steps}, {"final_norm", r.final_norm},
          {"sup_norm_trace", r.sup_norm_trace}};
}

json to_json(const ImplicationSample& s) {
  json out{{"channel", s.channel + 1}, {"x", s.x}};
  if (!s.window.empty()) out["window"] = s.window;
  if (!s.delayed.empty()) out["delayed"] = s.delayed;
  if (!s.held.empty()) out["held"] = s.held;
  if (!s.box.empty()) out["box"] = s.box;
  if (!s.u.empty()) out["u"] = s.u;
  if (!s.u_held.empty()) out["u_held"] = s.u_held;
  if (!s.d.empty()) out["d"] = s.d;
  return out;
}

json to_json(const ImplicationReport& r) {
  json vs = json::array();
  for (const auto& v : r.violations)
    vs.push_back({{"sample", to_json(v.sample)},
                  {"Q", v.Q},
                  {"premise", v.premise},
                  {"derivative", v.derivative},
                  {"bound", v.bound}});
  return {{"samples", r.samples},         {"premise_points", r.premise_points}, {"evaluations", r.evaluations},
          {"violation_count", r.violation_count}, {"falsified", r.falsified()}, {"violations", vs}};
}

json to_json(const ConvergenceReport& r) {
  json ch = json::array();
  for (const auto& c : r.channels) ch.push_back({{"converged", c.converged}, {"tail_sup", c.tail_sup}});
  return {{"tail_start", r.tail_start}, {"horizon_end", r.horizon_end}, {"all_converged", r.all_converged()},
          {"channels", ch}};
}

json to_json(const AsymptoticGainReport& r) {
  json ch = json::array();
  for (const auto& c : r.channels)
    ch.push_back({{"satisfied", c.satisfied},
                  {"tail_sup", c.tail_sup},
                  {"bound", c.bound},
                  {"margin", c.margin},
                  {"time", c.time}});
  return {{"tail_start", r.tail_start}, {"horizon_end", r.horizon_end}, {"u_sup", r.u_sup},
          {"all_satisfied", r.all_satisfied()}, {"channels", ch}};
}

// ---------------------------------------------------------------------------
// files

json parse(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << source << ":" << line << ":" << col << ": invalid JSON (" << e.what() << ")";
    throw ConfigError(os.str());
  }
}

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

}  // namespace vsg::json_io
