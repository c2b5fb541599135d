#pragma once

// JSON schema for gains, matrices, systems and reports. Readers throw
// ConfigError with the JSON path of the offending field.

#include <nlohmann/json.hpp>

#include <string>

#include "vsg/iteration.hpp"
#include "vsg/synthesis.hpp"
#include "vsg/validation.hpp"

namespace vsg::json_io {

using nlohmann::json;

/// {"kind": "zero"} | {"kind": "linear", "k"} | {"kind": "power", "k", "p"}
/// | {"kind": "logexpsq", "c", "th"} | {"kind": "max", "args": [...]}
/// | {"kind": "compose", "outer", "inner"} | {"kind": "scale", "k", "fn"}
json to_json(const GainFn& g);
GainFn gain_from_json(const json& j, const std::string& path = "$");

/// {"n": 3, "gains": [{"i": 1, "j": 2, "fn": {...}}, ...]}, 1-based, absent
/// entries zero.
json to_json(const GainMatrix& G);
GainMatrix matrix_from_json(const json& j, const std::string& path = "$");

/// {"zeta", "p": [...], "a1", "M"}; the matrix comes from the caller.
SynthesisInput synthesis_from_json(const json& j, GainMatrix gains, const std::string& path = "$");
json to_json(const SynthesisInput& inp);

json to_json(const Signal& s);
Signal signal_from_json(const json& j, const std::string& path = "$");

json to_json(const GCurve& g);
GCurve gcurve_from_json(const json& j, const std::string& path = "$");

/// {"type": "linear_ode" | "sampled_linear" | "linear_delay_network"
///          | "biochem_circuit" | "biochem_log", ...parameters}
std::shared_ptr<const Model> model_from_json(const json& j, const std::string& path = "$");
json model_to_json(const Model& m);

/// {"kind": "ode" | "delay" | "sampled_data", "model", "inputs", "disturbances",
///  "h", "dtilde"}; a single signal in "inputs"/"disturbances" is broadcast.
SystemSpec system_from_json(const json& j, const std::string& path = "$");
json to_json(const SystemSpec& s);

json to_json(const RateFn& r);
RateFn rate_from_json(const json& j, const std::string& path = "$");

/// {"gains" (optional, defaults to `fallback`), "rho": [...], "zeta"}
LyapunovSetup lyapunov_from_json(const json& j, const GainMatrix& fallback, const std::string& path = "$");
json to_json(const LyapunovSetup& s);

json to_json(const GridSpec& g);
GridSpec grid_from_json(const json& j, const std::string& path = "$");

json to_json(const ContractionVerdict& v);
json to_json(const SmallGainReport& r);
json to_json(const IterationResult& r);
json to_json(const ImplicationSample& s);
json to_json(const ImplicationReport& r);
json to_json(const ConvergenceReport& r);
json to_json(const AsymptoticGainReport& r);

/// Parses text, reporting syntax errors with line and column.
json parse(const std::string& text, const std::string& source);
json load_file(const std::string& path);

}  // namespace vsg::json_io
