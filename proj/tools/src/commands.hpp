#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "output.hpp"
#include "vsg/synthesis.hpp"
#include "vsg/validation.hpp"

namespace vsg::cli {

inline constexpr int kExitPositive = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNegative = 2;

struct Analysis {
  double horizon = 10.0;
  double dt = 0.01;
  double t0 = 0.0;
  std::optional<std::vector<double>> x0;
  std::uint64_t seed = 0;
  std::size_t samples = 100000;
  double radius = 10.0;
  double tol_impl = 1e-8;
  GridSpec grid;
  GridSpec table{1e-6, 1e6, 61};
  double tol_tail = kTolTail;
  double tail_fraction = kTailFraction;
  double tol_gain = kTolGain;
  std::size_t max_steps = 1000;
  double tol_conv = kDefaultTolConv;
};

struct Config {
  std::optional<SystemSpec> system;
  std::optional<GainMatrix> gains;
  std::optional<SynthesisInput> synthesis;
  std::optional<LyapunovSetup> lyapunov;
  Analysis analysis;

  /// The configuration with every default filled in.
  [[nodiscard]] nlohmann::json effective() const;
};

/// Reads the top-level config; unknown sections and fields are errors.
Config load_config(const std::string& path);

struct RunFlags {
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
};

int cmd_check_sg(const Config& cfg, const OutputDir& out);
int cmd_synth(const Config& cfg, const OutputDir& out);
int cmd_iterate(const Config& cfg, const OutputDir& out);
int cmd_simulate(const Config& cfg, const OutputDir& out);
int cmd_validate(const Config& cfg, const OutputDir& out, const RunFlags& flags);
int cmd_repro(const std::string& name, const OutputDir& out, const RunFlags& flags);

}  // namespace vsg::cli
