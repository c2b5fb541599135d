#include "vsg/iteration.hpp"

#include <algorithm>
#include <cmath>

namespace vsg {

const char* to_string(IterationStatus s) {
  switch (s) {
    case IterationStatus::ConvergedToZero:
      return "converged_to_zero";
    case IterationStatus::StalledAbove:
      return "stalled_above";
    case IterationStatus::Diverged:
      return "diverged";
  }
  return "?";
}

IterationResult iterate(const GainMatrix& G, const PlusVec& x0, std::size_t max_steps, double tol_conv) {
  if (max_steps == 0) throw std::invalid_argument("iterate: max_steps must be >= 1");
  if (G.n() != x0.size()) throw DimensionError("iterate: dimension mismatch");
  IterationResult res;
  res.iterates.push_back(x0);
  res.sup_norm_trace.push_back(x0.max_norm());
  if (x0.max_norm() < tol_conv) {
    res.status = IterationStatus::ConvergedToZero;
    res.final_norm = x0.max_norm();
    return res;
  }
  for (std::size_t k = 1; k <= max_steps; ++k) {
    PlusVec next = gamma_apply(G, res.iterates.back());
    const double nrm = next.max_norm();
    res.iterates.push_back(std::move(next));
    res.sup_norm_trace.push_back(nrm);
    res.steps = k;
    res.final_norm = nrm;
    if (nrm < tol_conv) {
      res.status = IterationStatus::ConvergedToZero;
      return res;
    }
    if (nrm > kDivergenceBound) {
      res.status = IterationStatus::Diverged;
      return res;
    }
  }
  res.status = IterationStatus::StalledAbove;
  return res;
}

bool lemma22_oracle(const GainMatrix& G, const PlusVec& x, const PlusVec& y, std::size_t max_steps,
                    double tol_conv) {
  if (!leq(gamma_apply(G, x), x)) throw PreconditionError("lemma22_oracle: requires Gamma(x) <= x");
  if (!leq(y, x)) throw PreconditionError("lemma22_oracle: requires y <= x");
  PlusVec xs = x;
  PlusVec ys = y;
  for (std::size_t k = 0; k <= max_steps; ++k) {
    if (!leq(ys, xs)) return false;
    if (ys.max_norm() < tol_conv) return true;
    xs = gamma_apply(G, xs);
    ys = gamma_apply(G, ys);
  }
  return false;
}

FixedPointResult least_fixed_point_vs_q(const GainMatrix& G, const PlusVec& a, std::size_t max_steps,
                                        double tol_conv) {
  PlusVec x = a;
  for (std::size_t k = 1; k <= max_steps; ++k) {
    PlusVec next = vec_max(a, gamma_apply(G, x));
    double change = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) change = std::max(change, std::abs(next[i] - x[i]));
    x = std::move(next);
    if (change <= tol_conv) {
      FixedPointResult res{x, q_operator(G, a), k, true};
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > res.q_of_a[i] + tol_conv) res.bounded = false;
      }
      return res;
    }
  }
  throw InconclusiveError("prop29_bound_check: monotone iteration did not settle within max_steps");
}

bool prop29_bound_check(const GainMatrix& G, const PlusVec& a, std::size_t max_steps, double tol_conv) {
  return least_fixed_point_vs_q(G, a, max_steps, tol_conv).bounded;
}

}  // namespace vsg
