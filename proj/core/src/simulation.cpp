#include "vsg/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vsg {

const char* to_string(SystemKind k) {
  switch (k) {
    case SystemKind::Ode:
      return "ode";
    case SystemKind::Delay:
      return "delay";
    case SystemKind::SampledData:
      return "sampled_data";
  }
  return "?";
}

SamplingPeriod SamplingPeriod::constant(double h) {
  SamplingPeriod p;
  p.kind = Kind::Constant;
  p.h_max = p.h_min = h;
  p.validate();
  return p;
}

SamplingPeriod SamplingPeriod::saturating(double h_min, double h_max, double kappa) {
  SamplingPeriod p;
  p.kind = Kind::Saturating;
  p.h_min = h_min;
  p.h_max = h_max;
  p.kappa = kappa;
  p.validate();
  return p;
}

void SamplingPeriod::validate() const {
  if (!(h_max > 0.0) || !std::isfinite(h_max)) throw ConfigError("sampling period: h_max must be finite and > 0");
  if (kind == Kind::Saturating) {
    if (!(h_min > 0.0) || h_min > h_max) throw ConfigError("sampling period: need 0 < h_min <= h_max");
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ConfigError("sampling period: kappa must be >= 0");
  }
}

double SamplingPeriod::eval(std::span<const double> x, std::span<const double>) const {
  if (kind == Kind::Constant) return h_max;
  double nx = 0.0;
  for (double v : x) nx = std::max(nx, std::abs(v));
  return h_min + (h_max - h_min) / (1.0 + kappa * nx);
}

namespace {

void eval_signals(const std::vector<Signal>& sigs, double t, std::span<double> out) {
  if (sigs.empty()) {
    std::fill(out.begin(), out.end(), 0.0);
  } else if (sigs.size() == 1) {
    std::fill(out.begin(), out.end(), sigs.front()(t));
  } else {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = sigs[k](t);
  }
}

void check_signal_count(const std::vector<Signal>& sigs, std::size_t want, const char* what) {
  if (sigs.size() > 1 && sigs.size() != want) {
    std::ostringstream os;
    os << "system: " << what << " needs 0, 1 or " << want << " signals, got " << sigs.size();
    throw ConfigError(os.str());
  }
}

}  // namespace

void SystemSpec::validate() const {
  if (!model) throw ConfigError("system: no model");
  check_signal_count(inputs, model->input_dim(), "inputs");
  check_signal_count(disturbances, model->disturbance_dim(), "disturbances");
  const bool has_delays = !model->delay_terms().empty();
  switch (kind) {
    case SystemKind::Ode:
      if (has_delays || model->sampled()) throw ConfigError("system: kind 'ode' needs an undelayed, unsampled model");
      break;
    case SystemKind::Delay:
      if (model->sampled()) throw ConfigError("system: kind 'delay' cannot use a sampled-data model");
      break;
    case SystemKind::SampledData:
      if (!model->sampled() || has_delays) throw ConfigError("system: kind 'sampled_data' needs a sampled-data model");
      h.validate();
      if (dtilde.inf() < 0.0) throw ConfigError("system: dtilde must be nonnegative");
      break;
  }
}

void SystemSpec::eval_inputs(double t, std::span<double> u) const { eval_signals(inputs, t, u); }
void SystemSpec::eval_disturbances(double t, std::span<double> d) const { eval_signals(disturbances, t, d); }

double SystemSpec::input_sup() const {
  double m = 0.0;
  for (const auto& s : inputs) m = std::max(m, s.sup_abs());
  return m;
}

History constant_history(std::vector<double> x) {
  return [x = std::move(x)](double) { return x; };
}

double Trajectory::max_norm(std::size_t k) const {
  double m = 0.0;
  for (double v : states.at(k)) m = std::max(m, std::abs(v));
  return m;
}

FiniteEscapeError::FiniteEscapeError(double time, std::vector<double> state)
    : std::runtime_error([&] {
        std::ostringstream os;
        os.precision(17);
        os << "finite escape: state norm exceeded " << kEscapeBound << " at t = " << time;
        return os.str();
      }()),
      time_(time),
      state_(std::move(state)) {}

namespace {

void check_step(double horizon, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("integrate: dt must be finite and > 0");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("integrate: horizon must be finite and > 0");
  if (dt > horizon) throw ConfigError("integrate: dt must not exceed the horizon");
}

std::size_t step_count(double horizon, double dt) {
  return static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
}

void check_escape(double t, const std::vector<double>& x) {
  for (double v : x) {
    if (!std::isfinite(v) || std::abs(v) > kEscapeBound) throw FiniteEscapeError(t, x);
  }
}

// Working storage for one RK4 evaluation.
struct Workspace {
  std::vector<double> u, d, delayed, stage, k1, k2, k3, k4;

  Workspace(std::size_t n, std::size_t m, std::size_t p, std::size_t q)
      : u(m), d(p), delayed(q), stage(n), k1(n), k2(n), k3(n), k4(n) {}
};

// One classical RK4 step of length h from (t, x). `fill_delayed(c, stage)`
// writes the delayed arguments for the stage at t + c h.
template <class FillDelayed>
std::vector<double> rk4_step(const SystemSpec& spec, Workspace& w, double t, const std::vector<double>& x, double h,
                             std::span<const double> held, std::span<const double> u_held,
                             FillDelayed&& fill_delayed) {
  const Model& m = *spec.model;
  const std::size_t n = x.size();
  auto eval = [&](double c, std::span<const double> xs, std::vector<double>& out) {
    const double ts = t + c * h;
    spec.eval_inputs(ts, w.u);
    spec.eval_disturbances(ts, w.d);
    fill_delayed(c, xs, w.delayed);
    RhsArgs args{ts, xs, w.delayed, held, w.u, u_held, w.d};
    m.rhs(args, out);
  };
  eval(0.0, x, w.k1);
  for (std::size_t i = 0; i < n; ++i) w.stage[i] = x[i] + 0.5 * h * w.k1[i];
  eval(0.5, w.stage, w.k2);
  for (std::size_t i = 0; i < n; ++i) w.stage[i] = x[i] + 0.5 * h * w.k2[i];
  eval(0.5, w.stage, w.k3);
  for (std::size_t i = 0; i < n; ++i) w.stage[i] = x[i] + h * w.k3[i];
  eval(1.0, w.stage, w.k4);
  std::vector<double> next(n);
  for (std::size_t i = 0; i < n; ++i) next[i] = x[i] + h / 6.0 * (w.k1[i] + 2.0 * w.k2[i] + 2.0 * w.k3[i] + w.k4[i]);
  return next;
}

void check_x0(const SystemSpec& spec, const std::vector<double>& x0) {
  if (x0.size() != spec.model->dim()) throw ConfigError("integrate: initial state has the wrong dimension");
  for (double v : x0) {
    if (!std::isfinite(v)) throw ConfigError("integrate: initial state must be finite");
  }
}

}  // namespace

Trajectory integrate_ode(const SystemSpec& spec, std::vector<double> x0, double horizon, double dt, double t0) {
  spec.validate();
  if (spec.kind != SystemKind::Ode) throw ConfigError("integrate_ode: system kind must be 'ode'");
  check_step(horizon, dt);
  check_x0(spec, x0);
  const Model& m = *spec.model;
  Workspace w(m.dim(), m.input_dim(), m.disturbance_dim(), 0);
  const std::size_t N = step_count(horizon, dt);

  Trajectory traj;
  traj.t0 = t0;
  traj.dt = dt;
  traj.times.reserve(N + 1);
  traj.states.reserve(N + 1);
  traj.times.push_back(t0);
  traj.states.push_back(std::move(x0));
  for (std::size_t k = 0; k < N; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    auto next = rk4_step(spec, w, t, traj.states.back(), dt, {}, {}, [](double, auto, auto&) {});
    const double t_next = t0 + static_cast<double>(k + 1) * dt;
    check_escape(t_next, next);
    traj.times.push_back(t_next);
    traj.states.push_back(std::move(next));
  }
  return traj;
}

Trajectory integrate_delay(const SystemSpec& spec, const History& history, double horizon, double dt, double t0) {
  spec.validate();
  if (spec.kind != SystemKind::Delay) throw ConfigError("integrate_delay: system kind must be 'delay'");
  check_step(horizon, dt);
  if (!history) throw ConfigError("integrate_delay: no history");
  const Model& m = *spec.model;
  const auto terms = m.delay_terms();

  std::vector<std::size_t> lag(terms.size());
  std::size_t qmax = 0;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const double q = terms[k].tau / dt;
    const double qr = std::round(q);
    if (std::abs(qr * dt - terms[k].tau) > 1e-12 * std::max(1.0, terms[k].tau)) {
      std::ostringstream os;
      os.precision(17);
      os << "integrate_delay: delay " << terms[k].tau << " is not a multiple of dt = " << dt;
      throw ConfigError(os.str());
    }
    lag[k] = static_cast<std::size_t>(qr);
    qmax = std::max(qmax, lag[k]);
  }

  Trajectory traj;
  traj.t0 = t0;
  traj.dt = dt;
  // buf[0] <-> t0 - qmax dt, buf[qmax] <-> t0
  std::vector<std::vector<double>> buf;
  const std::size_t N = step_count(horizon, dt);
  buf.reserve(qmax + N + 1);
  for (std::size_t k = 0; k <= qmax; ++k) {
    const double t = t0 - static_cast<double>(qmax - k) * dt;
    auto x = history(t);
    check_x0(spec, x);
    if (k < qmax) {
      traj.history_times.push_back(t);
      traj.history.push_back(x);
    }
    buf.push_back(std::move(x));
  }

  Workspace w(m.dim(), m.input_dim(), m.disturbance_dim(), terms.size());
  for (std::size_t k = 0; k < N; ++k) {
    const std::size_t g = qmax + k;
    const double t = t0 + static_cast<double>(k) * dt;
    auto fill = [&](double c, std::span<const double> xs, std::vector<double>& out) {
      for (std::size_t e = 0; e < terms.size(); ++e) {
        const std::size_t j = terms[e].component;
        if (lag[e] == 0) {
          out[e] = xs[j];
        } else {
          const auto& lo = buf[g - lag[e]];
          const auto& hi = buf[g - lag[e] + 1];
          out[e] = c == 0.0 ? lo[j] : (c == 1.0 ? hi[j] : (1.0 - c) * lo[j] + c * hi[j]);
        }
      }
    };
    auto next = rk4_step(spec, w, t, buf[g], dt, {}, {}, fill);
    check_escape(t0 + static_cast<double>(k + 1) * dt, next);
    buf.push_back(std::move(next));
  }

  traj.times.reserve(N + 1);
  for (std::size_t k = 0; k <= N; ++k) traj.times.push_back(t0 + static_cast<double>(k) * dt);
  traj.states.assign(std::make_move_iterator(buf.begin() + static_cast<std::ptrdiff_t>(qmax)),
                     std::make_move_iterator(buf.end()));
  return traj;
}

Trajectory integrate_sampled(const SystemSpec& spec, std::vector<double> x0, double horizon, double dt, double t0) {
  spec.validate();
  if (spec.kind != SystemKind::SampledData) throw ConfigError("integrate_sampled: system kind must be 'sampled_data'");
  check_step(horizon, dt);
  check_x0(spec, x0);
  const Model& m = *spec.model;
  Workspace w(m.dim(), m.input_dim(), m.disturbance_dim(), 0);
  std::vector<double> u_held(m.input_dim());

  Trajectory traj;
  traj.t0 = t0;
  traj.dt = dt;
  traj.times.push_back(t0);
  traj.states.push_back(std::move(x0));
  traj.sampling_times.push_back(t0);

  const double t_end = t0 + horizon;
  double tau = t0;
  while (tau < t_end) {
    const std::vector<double> held = traj.states.back();
    spec.eval_inputs(tau, u_held);
    const double h = spec.h.eval(held, u_held);
    if (!(h > 0.0) || !std::isfinite(h)) {
      std::ostringstream os;
      os << "integrate_sampled: sampling period evaluated to " << h << " at t = " << tau;
      throw ConfigError(os.str());
    }
    const double next = tau + std::exp(-spec.dtilde(tau)) * h;
    if (!(next > tau)) throw ConfigError("integrate_sampled: sampling times stopped increasing");
    const double end = std::min(next, t_end);
    const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((end - tau) / dt - 1e-9)));
    const double step = (end - tau) / static_cast<double>(steps);
    for (std::size_t s = 0; s < steps; ++s) {
      const double t = tau + static_cast<double>(s) * step;
      auto x = rk4_step(spec, w, t, traj.states.back(), step, held, u_held, [](double, auto, auto&) {});
      const double t_next = s + 1 == steps ? end : tau + static_cast<double>(s + 1) * step;
      check_escape(t_next, x);
      traj.times.push_back(t_next);
      traj.states.push_back(std::move(x));
    }
    if (next <= t_end) traj.sampling_times.push_back(next);
    tau = end;
  }
  return traj;
}

}  // namespace vsg
