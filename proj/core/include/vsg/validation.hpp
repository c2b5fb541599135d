#pragma once

// Sampled falsification of the Lyapunov implication behind the small-gain
// theorems, and tail checks of simulated trajectories against the
// synthesized asymptotic gains.
//
// Lyapunov functions are per component: Q_i(x) = x_i^2 / 2 and, for delay
// systems, V_i = sup over the window [t - r, t] of Q_i.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vsg/gain.hpp"
#include "vsg/iteration.hpp"
#include "vsg/network.hpp"
#include "vsg/simulation.hpp"

namespace vsg {

/// Decay rate rho_i. Beyond plain gains this covers the two rational-exponential
/// rates of the biochemical circuit in log coordinates (t = sqrt(2 s)):
///   BiochemFirst: a t min{(1 - lambda/theta)(1 - e^-t),
///                         (b + 1 - b/theta)(e^t - 1) / (b + 1 + (b/theta)(e^t - 1))}
///   BiochemChain: (1 - 1/mu) a t (1 - e^-t) / (1 + (1/mu)(e^t - 1))
class RateFn {
 public:
  enum class Kind { Gain, BiochemFirst, BiochemChain };

  RateFn() = default;
  static RateFn gain(GainFn g);
  static RateFn linear(double k) { return gain(GainFn::linear(k)); }
  static RateFn biochem_first(double a, double lambda, double theta, double b);
  static RateFn biochem_chain(double a, double mu);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] double operator()(double s) const { return eval(s); }
  [[nodiscard]] double eval(double s) const;
  [[nodiscard]] const GainFn& gain_fn() const { return g_; }
  [[nodiscard]] const std::vector<double>& params() const { return params_; }

 private:
  Kind kind_ = Kind::Gain;
  GainFn g_;
  std::vector<double> params_;
};

struct LyapunovSetup {
  GainMatrix gains{1};
  std::vector<RateFn> rho;
  GainFn zeta;  // input gain

  void validate(std::size_t n) const;
};

struct ImplicationOptions {
  std::size_t samples = 100000;
  double radius = 10.0;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  std::size_t max_reported = 50;
};

/// One sampled point of the premise region, enough to replay the check.
struct ImplicationSample {
  std::size_t channel = 0;
  std::vector<double> x;        // state at the current instant
  std::vector<double> window;   // sup |x_j| over the delay window (>= |x_j|)
  std::vector<double> delayed;  // one value per model delay term
  std::vector<double> held;     // sampled-data: x(tau_i)
  std::vector<double> box;      // sampled-data: admissible |held_k - x_k|
  std::vector<double> u;
  std::vector<double> u_held;
  std::vector<double> d;
};

struct ImplicationViolation {
  ImplicationSample sample;
  double Q = 0.0;           // Q_i at the sample
  double premise = 0.0;     // max{zeta(|u|), max_j gamma_ij(V_j)}
  double derivative = 0.0;  // x_i f_i
  double bound = 0.0;       // -rho_i(Q_i)
};

struct ImplicationReport {
  std::size_t samples = 0;
  std::size_t premise_points = 0;  // samples whose premise held
  std::size_t evaluations = 0;     // (sample, disturbance) pairs checked
  std::size_t violation_count = 0;
  std::vector<ImplicationViolation> violations;  // the first max_reported

  [[nodiscard]] bool falsified() const { return violation_count > 0; }
};

/// Draws states with |x_i| log-uniform in [1e-6 R, R] and, channel by channel,
/// fills the premise region: window norms up to the largest value the gains
/// allow (half of the time exactly at it), delayed values inside the windows,
/// inputs with zeta(|u|) <= Q_i and |u| <= sup of the configured input
/// signals, and the disturbances {worst case, +1, -1,
/// random}. For sampled-data models the held state ranges over a box around x
/// whose half-widths h_max * b_k bound the reachable set from sampled |f_k|.
ImplicationReport check_implication(const LyapunovSetup& setup, const SystemSpec& spec,
                                    const ImplicationOptions& opts = {});

/// Replays one sample; returns the violation when the premise holds and
/// x_i f_i > -rho_i(Q_i) + tol.
std::optional<ImplicationViolation> check_point(const LyapunovSetup& setup, const SystemSpec& spec,
                                                const ImplicationSample& sample, double tol = 1e-8);

inline constexpr double kTolTail = 1e-6;
inline constexpr double kTailFraction = 0.2;
inline constexpr double kTolGain = 0.05;

/// V_i(t_k) = sup over [t_k - r, t_k] of x_i^2 / 2, history included.
std::vector<std::vector<double>> lyapunov_channels(const Trajectory& traj, double r);

struct ChannelConvergence {
  bool converged = false;
  double tail_sup = 0.0;
};

struct ConvergenceReport {
  double tail_start = 0.0;
  double horizon_end = 0.0;
  std::vector<ChannelConvergence> channels;

  [[nodiscard]] bool all_converged() const;
};

/// Throws InconclusiveError when the tail holds fewer than 10 samples.
ConvergenceReport check_convergence(const Trajectory& traj, double r, double tol_tail = kTolTail,
                                    double tail_fraction = kTailFraction);

struct ChannelGainCheck {
  bool satisfied = false;
  double tail_sup = 0.0;
  double bound = 0.0;   // (1 + tol_gain) G_i(u_sup) + tol_tail
  double margin = 0.0;  // bound - tail_sup
  double time = 0.0;    // where the tail sup is attained
};

struct AsymptoticGainReport {
  double tail_start = 0.0;
  double horizon_end = 0.0;
  double u_sup = 0.0;
  std::vector<ChannelGainCheck> channels;

  [[nodiscard]] bool all_satisfied() const;
};

AsymptoticGainReport check_asymptotic_gain(const Trajectory& traj, double r, const std::vector<GainFn>& gmap,
                                           double u_sup, double tol_gain = kTolGain, double tol_tail = kTolTail,
                                           double tail_fraction = kTailFraction);

}  // namespace vsg
