#pragma once

// Deterministic scalar time signals used as inputs, disturbances and the
// sampling-rate perturbation of sampled-data loops.

#include <cstdint>
#include <string>
#include <vector>

namespace vsg {

enum class SignalKind { Zero, Constant, PiecewiseConstant, Sinusoid, Square, Noise };

const char* to_string(SignalKind k);

class Signal {
 public:
  Signal() = default;

  static Signal zero() { return {}; }
  static Signal constant(double value);
  /// value[k] on [breaks[k], breaks[k+1]); values.size() == breaks.size(),
  /// value[0] also before breaks[0].
  static Signal piecewise_constant(std::vector<double> breaks, std::vector<double> values);
  /// offset + amplitude * sin(omega t + phase)
  static Signal sinusoid(double amplitude, double omega, double phase = 0.0, double offset = 0.0);
  /// offset + amplitude on the first half of each period, offset - amplitude on the second.
  static Signal square(double amplitude, double period, double offset = 0.0);
  /// Held uniform values in [offset - amplitude, offset + amplitude], redrawn every
  /// `hold` time units from a counter-based hash of (seed, slot).
  static Signal noise(double amplitude, double hold, std::uint64_t seed, double offset = 0.0);

  [[nodiscard]] SignalKind kind() const { return kind_; }
  [[nodiscard]] double operator()(double t) const { return eval(t); }
  [[nodiscard]] double eval(double t) const;
  /// sup_t |s(t)|
  [[nodiscard]] double sup_abs() const;
  /// inf_t s(t)
  [[nodiscard]] double inf() const;

  // Raw parameters, for serialization.
  [[nodiscard]] const std::vector<double>& params() const { return params_; }
  [[nodiscard]] const std::vector<double>& breaks() const { return breaks_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] std::uint64_t seed() const { return seed_; }

 private:
  SignalKind kind_ = SignalKind::Zero;
  std::vector<double> params_;
  std::vector<double> breaks_;
  std::vector<double> values_;
  std::uint64_t seed_ = 0;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace vsg
