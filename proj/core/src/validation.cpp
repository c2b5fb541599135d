#include "vsg/validation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <sstream>

namespace vsg {

RateFn RateFn::gain(GainFn g) {
  RateFn r;
  r.kind_ = Kind::Gain;
  r.g_ = std::move(g);
  return r;
}

RateFn RateFn::biochem_first(double a, double lambda, double theta, double b) {
  if (!(a > 0.0) || !(lambda >= 0.0) || !(theta > lambda) || !(theta < 1.0) || !(b >= 0.0) ||
      !(b + 1.0 - b / theta > 0.0))
    throw std::invalid_argument("rate biochem_first: need a > 0, 0 <= lambda < theta < 1 and theta > b/(b+1)");
  RateFn r;
  r.kind_ = Kind::BiochemFirst;
  r.params_ = {a, lambda, theta, b};
  return r;
}

RateFn RateFn::biochem_chain(double a, double mu) {
  if (!(a > 0.0) || !(mu > 1.0) || !std::isfinite(mu))
    throw std::invalid_argument("rate biochem_chain: need a > 0 and mu > 1");
  RateFn r;
  r.kind_ = Kind::BiochemChain;
  r.params_ = {a, mu};
  return r;
}

double RateFn::eval(double s) const {
  if (!(s >= 0.0)) throw std::domain_error("rate: argument must be >= 0");
  if (kind_ == Kind::Gain) return g_(s);
  const double t = std::sqrt(2.0 * s);
  const double em = -std::expm1(-t);  // 1 - e^-t
  if (kind_ == Kind::BiochemFirst) {
    const double a = params_[0], lambda = params_[1], theta = params_[2], b = params_[3];
    const double first = (1.0 - lambda / theta) * em;
    const double c = b + 1.0 - b / theta;
    // (e^t - 1) / (b + 1 + (b/theta)(e^t - 1)) rewritten with e^-t to stay finite
    const double second = c * em / ((b + 1.0) * std::exp(-t) + (b / theta) * em);
    return a * t * std::min(first, second);
  }
  const double a = params_[0], mu = params_[1];
  // (1 - e^-t) / (1 + (e^t - 1)/mu) = (1 - e^-t) e^-t / (e^-t + (1 - e^-t)/mu)
  const double et = std::exp(-t);
  return (1.0 - 1.0 / mu) * a * t * em * et / (et + em / mu);
}

void LyapunovSetup::validate(std::size_t n) const {
  if (gains.n() != n) throw std::invalid_argument("lyapunov setup: gain matrix dimension does not match the model");
  if (rho.size() != n) throw std::invalid_argument("lyapunov setup: need one rate per component");
}

// ---------------------------------------------------------------------------
// implication

namespace {

double input_norm(const ImplicationSample& s) {
  double m = 0.0;
  for (double v : s.u) m = std::max(m, std::abs(v));
  for (double v : s.u_held) m = std::max(m, std::abs(v));
  return m;
}

// Largest N in [0, cap] with g(N^2 / 2) <= Q (g non-decreasing).
double largest_window(const GainFn& g, double Q, double cap) {
  if (g.is_zero() || g(0.5 * cap * cap) <= Q) return cap;
  double lo = 0.0;
  double hi = cap;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (g(0.5 * mid * mid) <= Q ? lo : hi) = mid;
  }
  return lo;
}

// Largest v in [0, cap] with zeta(v) <= Q.
double largest_input(const GainFn& zeta, double Q, double cap) {
  if (zeta.is_zero() || zeta(cap) <= Q) return cap;
  double lo = 0.0;
  double hi = cap;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (zeta(mid) <= Q ? lo : hi) = mid;
  }
  return lo;
}

struct Evaluation {
  bool premise = false;
  ImplicationViolation v;
};

Evaluation evaluate(const LyapunovSetup& setup, const Model& model, const ImplicationSample& s) {
  const std::size_t n = model.dim();
  const std::size_t i = s.channel;
  const auto terms = model.delay_terms();
  Evaluation out;
  out.v.Q = 0.5 * s.x[i] * s.x[i];

  std::vector<double> N(n);
  for (std::size_t j = 0; j < n; ++j) {
    N[j] = std::abs(s.x[j]);
    if (!s.window.empty()) N[j] = std::max(N[j], s.window[j]);
  }
  for (std::size_t e = 0; e < terms.size(); ++e) N[terms[e].component] = std::max(N[terms[e].component], std::abs(s.delayed[e]));

  double premise = setup.zeta(input_norm(s));
  for (std::size_t j = 0; j < n; ++j) premise = std::max(premise, setup.gains.at(i, j)(0.5 * N[j] * N[j]));
  if (!s.held.empty()) {
    for (std::size_t j = 0; j < n; ++j) {
      premise = std::max(premise, setup.gains.at(i, j)(0.5 * s.held[j] * s.held[j]));
      if (!s.box.empty() && std::abs(s.held[j] - s.x[j]) > s.box[j]) return out;
    }
  }
  out.v.premise = premise;
  if (premise > out.v.Q) return out;
  out.premise = true;

  std::vector<double> f(n);
  RhsArgs args{0.0, s.x, s.delayed, s.held, s.u, s.u_held, s.d};
  model.rhs(args, f);
  out.v.derivative = s.x[i] * f[i];
  out.v.bound = -setup.rho[i](out.v.Q);
  return out;
}

void check_sample_shape(const Model& model, const ImplicationSample& s) {
  const std::size_t n = model.dim();
  if (s.channel >= n || s.x.size() != n || s.delayed.size() != model.delay_terms().size() ||
      (!s.window.empty() && s.window.size() != n) || (model.sampled() && s.held.size() != n) ||
      s.u.size() != model.input_dim() || s.d.size() != model.disturbance_dim())
    throw std::invalid_argument("check_point: sample does not match the model dimensions");
}

}  // namespace

std::optional<ImplicationViolation> check_point(const LyapunovSetup& setup, const SystemSpec& spec,
                                                const ImplicationSample& sample, double tol) {
  spec.validate();
  setup.validate(spec.model->dim());
  check_sample_shape(*spec.model, sample);
  auto e = evaluate(setup, *spec.model, sample);
  if (!e.premise || !(e.v.derivative > e.v.bound + tol)) return std::nullopt;
  e.v.sample = sample;
  return e.v;
}

ImplicationReport check_implication(const LyapunovSetup& setup, const SystemSpec& spec,
                                    const ImplicationOptions& opts) {
  spec.validate();
  const Model& model = *spec.model;
  const std::size_t n = model.dim();
  setup.validate(n);
  if (!(opts.radius > 0.0)) throw std::invalid_argument("check_implication: radius must be > 0");

  const auto terms = model.delay_terms();
  const bool delayed = !terms.empty();
  const bool sampled = model.sampled();
  const std::size_t nu = model.input_dim();
  const std::size_t nd = model.disturbance_dim();
  const double R = opts.radius;

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  auto sym = [&](double bound, bool extreme) {
    if (extreme) return coin(rng) ? bound : -bound;
    return bound * (2.0 * unit(rng) - 1.0);
  };

  ImplicationReport rep;
  std::vector<double> B(n);
  std::vector<double> f(n);
  for (std::size_t s = 0; s < opts.samples; ++s) {
    ++rep.samples;
    ImplicationSample smp;
    smp.channel = s % n;
    const std::size_t i = smp.channel;
    const double m = R * std::exp(std::log(1e-6) * unit(rng));
    const double Q = 0.5 * m * m;
    for (std::size_t j = 0; j < n; ++j) B[j] = largest_window(setup.gains.at(i, j), Q, R);
    if (B[i] < m) continue;  // the premise cannot hold for this |x_i|
    const double U = std::min(largest_input(setup.zeta, Q, R), spec.input_sup());

    smp.x.assign(n, 0.0);
    if (delayed) {
      smp.window.assign(n, 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        const double lo = j == i ? m : 0.0;
        smp.window[j] = coin(rng) ? B[j] : lo + (B[j] - lo) * unit(rng);
        smp.x[j] = j == i ? (coin(rng) ? m : -m) : sym(smp.window[j], unit(rng) < 0.25);
      }
      smp.delayed.resize(terms.size());
      for (std::size_t e = 0; e < terms.size(); ++e) {
        const std::size_t j = terms[e].component;
        smp.delayed[e] = terms[e].tau == 0.0 ? smp.x[j] : sym(smp.window[j], coin(rng));
      }
    } else {
      for (std::size_t j = 0; j < n; ++j) smp.x[j] = j == i ? (coin(rng) ? m : -m) : sym(B[j], coin(rng));
    }
    smp.u.resize(nu);
    for (auto& v : smp.u) v = sym(U, coin(rng));

    if (sampled) {
      smp.u_held.resize(nu);
      for (auto& v : smp.u_held) v = sym(U, coin(rng));
      // b_k: sampled sup of |f_k| over the premise region
      std::vector<double> bk(n, 0.0);
      std::vector<double> xi(n), x0(n), uu(nu), u0(nu), dd(nd);
      for (int probe = 0; probe < 32; ++probe) {
        for (std::size_t j = 0; j < n; ++j) {
          xi[j] = sym(B[j], coin(rng));
          x0[j] = sym(B[j], coin(rng));
        }
        for (auto& v : uu) v = sym(U, coin(rng));
        for (auto& v : u0) v = sym(U, coin(rng));
        for (auto& v : dd) v = sym(1.0, coin(rng));
        RhsArgs a{0.0, xi, {}, x0, uu, u0, dd};
        model.rhs(a, f);
        for (std::size_t k = 0; k < n; ++k) bk[k] = std::max(bk[k], std::abs(f[k]));
      }
      const double T = coin(rng) ? spec.h.h_max : spec.h.h_max * unit(rng);
      smp.box.resize(n);
      smp.held.resize(n);
      for (std::size_t k = 0; k < n; ++k) {
        smp.box[k] = spec.h.h_max * bk[k];
        const double moved = smp.x[k] + T * sym(bk[k], coin(rng));
        smp.held[k] = std::clamp(moved, -B[k], B[k]);
      }
    }

    std::vector<std::vector<double>> candidates;
    if (nd == 0) {
      candidates.emplace_back();
    } else {
      RhsArgs probe{0.0, smp.x, smp.delayed, smp.held, smp.u, smp.u_held, {}};
      if (auto w = model.worst_disturbance(probe, i)) candidates.push_back(*w);
      candidates.emplace_back(nd, 1.0);
      candidates.emplace_back(nd, -1.0);
      std::vector<double> r(nd);
      for (auto& v : r) v = sym(1.0, false);
      candidates.push_back(std::move(r));
    }

    bool counted = false;
    for (auto& d : candidates) {
      smp.d = std::move(d);
      auto e = evaluate(setup, model, smp);
      if (!e.premise) break;
      if (!counted) {
        ++rep.premise_points;
        counted = true;
      }
      ++rep.evaluations;
      if (e.v.derivative > e.v.bound + opts.tol) {
        ++rep.violation_count;
        if (rep.violations.size() < opts.max_reported) {
          e.v.sample = smp;
          rep.violations.push_back(std::move(e.v));
        }
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// trajectory checks

std::vector<std::vector<double>> lyapunov_channels(const Trajectory& traj, double r) {
  const std::size_t n = traj.dim();
  std::vector<double> times = traj.history_times;
  times.insert(times.end(), traj.times.begin(), traj.times.end());
  std::vector<const std::vector<double>*> rows;
  for (const auto& h : traj.history) rows.push_back(&h);
  for (const auto& s : traj.states) rows.push_back(&s);
  const std::size_t offset = traj.history.size();

  std::vector<std::vector<double>> V(n, std::vector<double>(traj.size()));
  for (std::size_t i = 0; i < n; ++i) {
    std::deque<std::size_t> q;  // indices with decreasing |x_i|
    std::size_t next = 0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const std::size_t g = offset + k;
      while (next <= g) {
        const double v = std::abs((*rows[next])[i]);
        while (!q.empty() && std::abs((*rows[q.back()])[i]) <= v) q.pop_back();
        q.push_back(next++);
      }
      const double t_lo = times[g] - r - 1e-12 * std::max(1.0, std::abs(times[g]));
      while (times[q.front()] < t_lo) q.pop_front();
      const double x = (*rows[q.front()])[i];
      V[i][k] = 0.5 * x * x;
    }
  }
  return V;
}

namespace {

std::size_t tail_begin(const Trajectory& traj, double tail_fraction, double& tail_start) {
  if (!(tail_fraction > 0.0) || tail_fraction > 1.0) throw std::invalid_argument("tail_fraction must be in (0, 1]");
  if (traj.size() == 0) throw InconclusiveError("empty trajectory");
  const double t0 = traj.times.front();
  const double t1 = traj.times.back();
  tail_start = t1 - tail_fraction * (t1 - t0);
  const auto it = std::lower_bound(traj.times.begin(), traj.times.end(), tail_start);
  const auto k = static_cast<std::size_t>(it - traj.times.begin());
  if (traj.size() - k < 10) {
    std::ostringstream os;
    os << "trajectory tail has " << traj.size() - k << " samples; need at least 10 (extend the horizon)";
    throw InconclusiveError(os.str());
  }
  return k;
}

}  // namespace

bool ConvergenceReport::all_converged() const {
  return std::all_of(channels.begin(), channels.end(), [](const auto& c) { return c.converged; });
}

ConvergenceReport check_convergence(const Trajectory& traj, double r, double tol_tail, double tail_fraction) {
  ConvergenceReport rep;
  const std::size_t k0 = tail_begin(traj, tail_fraction, rep.tail_start);
  rep.horizon_end = traj.times.back();
  const auto V = lyapunov_channels(traj, r);
  for (const auto& ch : V) {
    ChannelConvergence c;
    c.tail_sup = *std::max_element(ch.begin() + static_cast<std::ptrdiff_t>(k0), ch.end());
    c.converged = c.tail_sup < tol_tail;
    rep.channels.push_back(c);
  }
  return rep;
}

bool AsymptoticGainReport::all_satisfied() const {
  return std::all_of(channels.begin(), channels.end(), [](const auto& c) { return c.satisfied; });
}

AsymptoticGainReport check_asymptotic_gain(const Trajectory& traj, double r, const std::vector<GainFn>& gmap,
                                           double u_sup, double tol_gain, double tol_tail, double tail_fraction) {
  if (gmap.size() != traj.dim()) throw std::invalid_argument("check_asymptotic_gain: need one gain per component");
  if (!(u_sup >= 0.0)) throw std::invalid_argument("check_asymptotic_gain: u_sup must be >= 0");
  AsymptoticGainReport rep;
  rep.u_sup = u_sup;
  const std::size_t k0 = tail_begin(traj, tail_fraction, rep.tail_start);
  rep.horizon_end = traj.times.back();
  const auto V = lyapunov_channels(traj, r);
  for (std::size_t i = 0; i < V.size(); ++i) {
    ChannelGainCheck c;
    const auto it = std::max_element(V[i].begin() + static_cast<std::ptrdiff_t>(k0), V[i].end());
    c.tail_sup = *it;
    c.time = traj.times[static_cast<std::size_t>(it - V[i].begin())];
    c.bound = (1.0 + tol_gain) * gmap[i](u_sup) + tol_tail;
    c.margin = c.bound - c.tail_sup;
    c.satisfied = c.tail_sup <= c.bound;
    rep.channels.push_back(c);
  }
  return rep;
}

}  // namespace vsg
