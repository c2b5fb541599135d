#include "vsg/signals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vsg {

const char* to_string(SignalKind k) {
  switch (k) {
    case SignalKind::Zero:
      return "zero";
    case SignalKind::Constant:
      return "constant";
    case SignalKind::PiecewiseConstant:
      return "piecewise_constant";
    case SignalKind::Sinusoid:
      return "sinusoid";
    case SignalKind::Square:
      return "square";
    case SignalKind::Noise:
      return "noise";
  }
  return "?";
}

namespace {

void require_finite(std::initializer_list<double> vs, const char* what) {
  for (double v : vs) {
    if (!std::isfinite(v)) throw std::invalid_argument(what);
  }
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Signal Signal::constant(double value) {
  require_finite({value}, "signal: constant value must be finite");
  Signal s;
  s.kind_ = SignalKind::Constant;
  s.params_ = {value};
  return s;
}

Signal Signal::piecewise_constant(std::vector<double> breaks, std::vector<double> values) {
  if (breaks.empty() || breaks.size() != values.size())
    throw std::invalid_argument("signal: piecewise_constant needs matching, nonempty breaks and values");
  for (std::size_t k = 0; k < breaks.size(); ++k) {
    require_finite({breaks[k], values[k]}, "signal: piecewise_constant entries must be finite");
    if (k > 0 && !(breaks[k] > breaks[k - 1]))
      throw std::invalid_argument("signal: piecewise_constant breaks must be strictly increasing");
  }
  Signal s;
  s.kind_ = SignalKind::PiecewiseConstant;
  s.breaks_ = std::move(breaks);
  s.values_ = std::move(values);
  return s;
}

Signal Signal::sinusoid(double amplitude, double omega, double phase, double offset) {
  require_finite({amplitude, omega, phase, offset}, "signal: sinusoid parameters must be finite");
  Signal s;
  s.kind_ = SignalKind::Sinusoid;
  s.params_ = {amplitude, omega, phase, offset};
  return s;
}

Signal Signal::square(double amplitude, double period, double offset) {
  require_finite({amplitude, period, offset}, "signal: square parameters must be finite");
  if (!(period > 0.0)) throw std::invalid_argument("signal: square period must be > 0");
  Signal s;
  s.kind_ = SignalKind::Square;
  s.params_ = {amplitude, period, offset};
  return s;
}

Signal Signal::noise(double amplitude, double hold, std::uint64_t seed, double offset) {
  require_finite({amplitude, hold, offset}, "signal: noise parameters must be finite");
  if (!(hold > 0.0)) throw std::invalid_argument("signal: noise hold must be > 0");
  Signal s;
  s.kind_ = SignalKind::Noise;
  s.params_ = {amplitude, hold, offset};
  s.seed_ = seed;
  return s;
}

double Signal::eval(double t) const {
  switch (kind_) {
    case SignalKind::Zero:
      return 0.0;
    case SignalKind::Constant:
      return params_[0];
    case SignalKind::PiecewiseConstant: {
      const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
      const auto k = it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
      return values_[k];
    }
    case SignalKind::Sinusoid:
      return params_[3] + params_[0] * std::sin(params_[1] * t + params_[2]);
    case SignalKind::Square: {
      const double phase = t / params_[1] - std::floor(t / params_[1]);
      return params_[2] + (phase < 0.5 ? params_[0] : -params_[0]);
    }
    case SignalKind::Noise: {
      const auto slot = static_cast<std::int64_t>(std::floor(t / params_[1]));
      const std::uint64_t h = mix64(seed_ ^ mix64(static_cast<std::uint64_t>(slot)));
      const double unit = static_cast<double>(h >> 11) * 0x1.0p-53;  // [0, 1)
      return params_[2] + params_[0] * (2.0 * unit - 1.0);
    }
  }
  return 0.0;
}

double Signal::sup_abs() const {
  switch (kind_) {
    case SignalKind::Zero:
      return 0.0;
    case SignalKind::Constant:
      return std::abs(params_[0]);
    case SignalKind::PiecewiseConstant: {
      double m = 0.0;
      for (double v : values_) m = std::max(m, std::abs(v));
      return m;
    }
    case SignalKind::Sinusoid:
    case SignalKind::Noise:
      return std::abs(params_[kind_ == SignalKind::Sinusoid ? 3 : 2]) + std::abs(params_[0]);
    case SignalKind::Square:
      return std::abs(params_[2]) + std::abs(params_[0]);
  }
  return 0.0;
}

double Signal::inf() const {
  switch (kind_) {
    case SignalKind::Zero:
      return 0.0;
    case SignalKind::Constant:
      return params_[0];
    case SignalKind::PiecewiseConstant:
      return *std::min_element(values_.begin(), values_.end());
    case SignalKind::Sinusoid:
      return params_[3] - std::abs(params_[0]);
    case SignalKind::Square:
    case SignalKind::Noise:
      return params_[2] - std::abs(params_[0]);
  }
  return 0.0;
}

}  // namespace vsg
