#include <doctest.h>

#include <random>

#include "vsg/json_io.hpp"

using namespace vsg;
using namespace vsg::json_io;

namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("gain round trip preserves values") {
  const auto g = GainFn::max(GainFn::compose(GainFn::logexpsq(0.5, 0.7), GainFn::power(2.0, 1.5)),
                             GainFn::scale(3.0, GainFn::max_of({GainFn::linear(0.2), GainFn::zero()})));
  const auto back = gain_from_json(json::parse(to_json(g).dump()));
  for (double s : GridSpec{1e-6, 1e6, 50}.samples()) CHECK(back(s) == g(s));
  CHECK(to_json(back) == to_json(g));
}

TEST_CASE("matrix schema") {
  auto j = json::parse(R"({"n": 2, "gains": [{"i": 1, "j": 2, "fn": {"kind": "linear", "k": 0.5}}]})");
  auto G = matrix_from_json(j);
  CHECK(G.n() == 2);
  CHECK(G.at(0, 1)(2.0) == 1.0);
  CHECK(G.at(1, 0).is_zero());
  CHECK(to_json(G) == j);

  CHECK(error_of([] { matrix_from_json(json::parse(R"({"n": 2, "gains": [{"i": 3, "j": 1, "fn": {"kind": "zero"}}]})")); }) ==
        "$.gains[0].i: index out of range 1..2");
  CHECK(error_of([] {
          matrix_from_json(json::parse(R"({"n": 1, "gains": [{"i": 1, "j": 1, "fn": {"kind": "linear", "k": -1}}]})"));
        }).rfind("$.gains[0].fn:", 0) == 0);
  CHECK(error_of([] { gain_from_json(json::parse(R"({"kind": "cubic"})")); }) == "$.kind: unknown gain kind 'cubic'");
  CHECK(error_of([] { gain_from_json(json::parse(R"({"kind": "power", "k": 1})")); }) == "$: missing field 'p'");
}

TEST_CASE("system round trip") {
  auto j = json::parse(R"({
    "kind": "delay",
    "model": {"type": "linear_delay_network", "a": [1, 2], "c": [[0.1, 0.2], [0.3, 0.4]], "r": 0.5,
              "coupling": "signal"},
    "inputs": {"kind": "sinusoid", "amplitude": 0.5, "omega": 2},
    "disturbances": [{"kind": "square", "amplitude": 1, "period": 0.7}, {"kind": "noise", "amplitude": 1, "hold": 0.1, "seed": 9}]
  })");
  auto s = system_from_json(j);
  CHECK(s.kind == SystemKind::Delay);
  CHECK(s.model->dim() == 2);
  CHECK(s.inputs.size() == 1);
  auto again = system_from_json(to_json(s));
  CHECK(to_json(again) == to_json(s));
  CHECK(again.disturbances[1](0.33) == s.disturbances[1](0.33));

  auto sd = system_from_json(json::parse(R"({
    "kind": "sampled_data",
    "model": {"type": "sampled_linear", "A": [[0]], "H": [[-1]]},
    "h": {"kind": "saturating", "h_min": 0.01, "h_max": 0.2, "kappa": 1},
    "dtilde": {"kind": "constant", "value": 0.5}})"));
  CHECK(to_json(system_from_json(to_json(sd))) == to_json(sd));

  auto bio = system_from_json(json::parse(R"({
    "kind": "delay",
    "model": {"type": "biochem_log", "a": [1, 1], "tau": [0.1, 0.2], "g": {"kind": "hill", "scale": 3, "p": 1}}})"));
  CHECK(to_json(bio)["model"]["xstar"][1].get<double>() == doctest::Approx(2.0));

  CHECK(error_of([] { system_from_json(json::parse(R"({"kind": "ode", "model": {"type": "linear_ode", "A": [[1, 2]]}})")); })
            .rfind("$.model:", 0) == 0);
  CHECK(error_of([] {
          system_from_json(json::parse(R"({"kind": "sampled_data", "model": {"type": "sampled_linear", "A": [[0]], "H": [[1]]}})"));
        }) == "$: missing field 'h' for a sampled_data system");
  CHECK(error_of([] {
          system_from_json(json::parse(R"({"kind": "ode", "model": {"type": "linear_delay_network", "a": [1], "c": [[0]], "r": 1}})"));
        }).find("kind 'ode'") != std::string::npos);
}

TEST_CASE("synthesis and lyapunov sections") {
  GainMatrix G(2);
  auto inp = synthesis_from_json(json::parse(R"({"zeta": {"kind": "linear", "k": 1}, "M": 2,
      "a1": {"kind": "power", "k": 0.25, "p": 2}})"), G);
  CHECK(inp.M == 2.0);
  CHECK(inp.a1(2.0) == 1.0);
  CHECK(error_of([&] { synthesis_from_json(json::parse(R"({"zeta": {"kind": "zero"}, "M": 0.5})"), G); }).rfind("$:", 0) == 0);

  auto ly = lyapunov_from_json(json::parse(R"({"rho": [{"kind": "linear", "k": 0.1},
      {"kind": "biochem_chain", "a": 1, "mu": 1.1}]})"), G);
  CHECK(ly.rho[1].kind() == RateFn::Kind::BiochemChain);
  CHECK(to_json(ly)["rho"][1]["mu"] == 1.1);
}

TEST_CASE("parse errors carry line and column") {
  const auto msg = error_of([] { (void)parse("{\n  \"n\": 2,\n  oops\n}", "cfg.json"); });
  CHECK(msg.rfind("cfg.json:3:3:", 0) == 0);
  CHECK(error_of([] { (void)load_file("/nonexistent/x.json"); }) == "/nonexistent/x.json: cannot open file");
}
