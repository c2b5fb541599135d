#pragma once

// Iteration of the monotone discrete-time system x_{k+1} = Gamma(x_k) and
// the numerical oracles for its convergence lemma and fixed-point bound.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "vsg/network.hpp"

namespace vsg {

inline constexpr double kDefaultTolConv = 1e-9;
inline constexpr double kDivergenceBound = 1e12;

enum class IterationStatus { ConvergedToZero, StalledAbove, Diverged };

const char* to_string(IterationStatus s);

struct IterationResult {
  std::vector<PlusVec> iterates;  // x0, Gamma(x0), ...
  IterationStatus status = IterationStatus::StalledAbove;
  std::size_t steps = 0;         // applications of Gamma performed
  double final_norm = 0.0;       // max-norm of the last iterate
  std::vector<double> sup_norm_trace;
};

IterationResult iterate(const GainMatrix& G, const PlusVec& x0, std::size_t max_steps,
                        double tol_conv = kDefaultTolConv);

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InconclusiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requires Gamma(x) <= x and y <= x. Iterates from x and y side by side and
/// returns true iff the y-orbit reaches zero with Gamma^k(y) <= Gamma^k(x) at
/// every step.
bool lemma22_oracle(const GainMatrix& G, const PlusVec& x, const PlusVec& y, std::size_t max_steps = 10000,
                    double tol_conv = kDefaultTolConv);

struct FixedPointResult {
  PlusVec fixed_point;
  PlusVec q_of_a;
  std::size_t steps = 0;
  bool bounded = false;  // fixed_point <= Q(a) + tol
};

/// Least fixed point of x -> MAX{a, Gamma(x)} by monotone iteration from a,
/// compared against Q(a). Throws InconclusiveError without convergence.
FixedPointResult least_fixed_point_vs_q(const GainMatrix& G, const PlusVec& a, std::size_t max_steps,
                                        double tol_conv = kDefaultTolConv);

bool prop29_bound_check(const GainMatrix& G, const PlusVec& a, std::size_t max_steps,
                        double tol_conv = kDefaultTolConv);

}  // namespace vsg
