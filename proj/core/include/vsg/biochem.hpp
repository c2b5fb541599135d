#pragma once

// Equilibrium, sector hypothesis and log coordinates for the delayed
// biochemical control circuit.

#include <stdexcept>
#include <string>
#include <vector>

#include "vsg/models.hpp"
#include "vsg/simulation.hpp"

namespace vsg {

class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// X* with (a_1 ... a_i) X_i* = g(X_n*), where X_n* > 0 solves (a_1 ... a_n) X = g(X).
/// The root is bracketed on a log scan of [1e-8, 1e8] and refined by bisection
/// until |a X - g(X)| <= 1e-10. Throws HypothesisError without a positive root.
std::vector<double> biochem_equilibrium(const std::vector<double>& a, const GCurve& g);

struct HypothesisReport {
  double xn_star = 0.0;
  double a = 0.0;       // product of the a_i
  double K = 0.0;       // chosen constant of the lower sector bound
  double K_lower = 0.0;  // sup of the lower-bound constraints on K
  double K_upper = 0.0;  // inf of the upper-bound constraints on K
  double lambda = 0.0;   // grid sup of (g(X)/a - X*) / |X - X*|
  double b = 0.0;        // K / X_n*
  bool left_holds = false;
  bool right_holds = false;
  std::string detail;

  [[nodiscard]] bool holds() const { return left_holds && right_holds; }
  /// Lower end of the admissible window for theta: max{b/(b+1), lambda}.
  [[nodiscard]] double theta_lower() const;
};

/// Checks the two-sided sector condition
///   (K + X*) X / (K + X) <= g(X)/a <= X* + lambda |X - X*|   for X >= 0
/// on a log grid of `points` values in [1e-6 X*, 1e6 X*] plus points next to X*.
/// Comparisons use a relative tolerance of `rel_tol` so that curves meeting a
/// bound identically are accepted.
HypothesisReport check_hypothesis_h(const std::vector<double>& a, const GCurve& g, std::size_t points = 4001,
                                    double rel_tol = 1e-9);

/// x_i = ln(X_i / X_i*); throws std::domain_error on a nonpositive component.
std::vector<double> log_transform(std::span<const double> X, std::span<const double> xstar);
std::vector<double> log_transform_inverse(std::span<const double> x, std::span<const double> xstar);
Trajectory log_transform(const Trajectory& traj, std::span<const double> xstar);

}  // namespace vsg
