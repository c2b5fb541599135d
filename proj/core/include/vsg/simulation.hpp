#pragma once

// Fixed-step RK4 integration of ODEs, of retarded equations by the method of
// steps, and of sampled-data loops with a state-dependent sampling period.

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "vsg/models.hpp"
#include "vsg/signals.hpp"

namespace vsg {

inline constexpr double kEscapeBound = 1e12;

enum class SystemKind { Ode, Delay, SampledData };

const char* to_string(SystemKind k);

/// h(x, u): the sampling period of a sampled-data loop, valued in (0, h_max].
///   Constant:   h = h_max
///   Saturating: h = h_min + (h_max - h_min) / (1 + kappa |x|_inf)
struct SamplingPeriod {
  enum class Kind { Constant, Saturating };
  Kind kind = Kind::Constant;
  double h_max = 0.1;
  double h_min = 0.1;
  double kappa = 0.0;

  static SamplingPeriod constant(double h);
  static SamplingPeriod saturating(double h_min, double h_max, double kappa);

  void validate() const;
  [[nodiscard]] double eval(std::span<const double> x, std::span<const double> u) const;
};

struct SystemSpec {
  SystemKind kind = SystemKind::Ode;
  std::shared_ptr<const Model> model;
  std::vector<Signal> inputs;        // empty: zero, one entry: broadcast
  std::vector<Signal> disturbances;  // same convention
  SamplingPeriod h;                  // SampledData only
  Signal dtilde;                     // SampledData only, nonnegative

  void validate() const;
  void eval_inputs(double t, std::span<double> u) const;
  void eval_disturbances(double t, std::span<double> d) const;
  /// sup_t max_k |u_k(t)|
  [[nodiscard]] double input_sup() const;
};

/// Initial segment for retarded equations: the state at time t <= t0.
using History = std::function<std::vector<double>(double t)>;

History constant_history(std::vector<double> x);

struct Trajectory {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  /// Grid samples of the initial segment on [t0 - r, t0) (Delay kind).
  std::vector<double> history_times;
  std::vector<std::vector<double>> history;
  /// tau_0 < tau_1 < ... (SampledData kind).
  std::vector<double> sampling_times;

  [[nodiscard]] std::size_t dim() const { return states.empty() ? 0 : states.front().size(); }
  [[nodiscard]] std::size_t size() const { return states.size(); }
  [[nodiscard]] const std::vector<double>& final_state() const { return states.back(); }
  [[nodiscard]] double max_norm(std::size_t k) const;
};

class FiniteEscapeError : public std::runtime_error {
 public:
  FiniteEscapeError(double time, std::vector<double> state);
  [[nodiscard]] double time() const { return time_; }
  [[nodiscard]] const std::vector<double>& state() const { return state_; }

 private:
  double time_;
  std::vector<double> state_;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Trajectory integrate_ode(const SystemSpec& spec, std::vector<double> x0, double horizon, double dt, double t0 = 0.0);

/// Every delay must be an integer multiple of dt (within 1e-12 relative);
/// stage values between grid nodes are linearly interpolated.
Trajectory integrate_delay(const SystemSpec& spec, const History& history, double horizon, double dt,
                           double t0 = 0.0);

/// tau_{i+1} = tau_i + exp(-dtilde(tau_i)) h(x(tau_i), u(tau_i)); each
/// inter-sample interval is split into ceil(len / dt) equal RK4 steps so that
/// every sampling time is a grid node.
Trajectory integrate_sampled(const SystemSpec& spec, std::vector<double> x0, double horizon, double dt,
                             double t0 = 0.0);

}  // namespace vsg
