#pragma once

// MAX-preserving maps on the nonnegative orthant built from a matrix of gains,
// and the cyclic small-gain test that decides global asymptotic stability of
// x_{k+1} = Gamma(x_k).

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vsg/gain.hpp"

namespace vsg {

/// A vector with nonnegative finite entries.
class PlusVec {
 public:
  PlusVec() = default;
  explicit PlusVec(std::vector<double> v);
  PlusVec(std::initializer_list<double> v);
  static PlusVec zeros(std::size_t n) { return PlusVec(std::vector<double>(n, 0.0)); }

  [[nodiscard]] std::size_t size() const { return v_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return v_[i]; }
  [[nodiscard]] const std::vector<double>& values() const { return v_; }
  [[nodiscard]] double max_norm() const;

  friend bool operator==(const PlusVec&, const PlusVec&) = default;

 private:
  std::vector<double> v_;
};

/// Componentwise order x <= y.
bool leq(const PlusVec& x, const PlusVec& y);

/// Componentwise maximum; throws on an empty list or mixed dimensions.
PlusVec vec_max(std::span<const PlusVec> xs);
PlusVec vec_max(const PlusVec& x, const PlusVec& y);

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class GainMatrix {
 public:
  /// n x n matrix of zero gains.
  explicit GainMatrix(std::size_t n);

  [[nodiscard]] std::size_t n() const { return n_; }
  /// 0-based access.
  [[nodiscard]] const GainFn& at(std::size_t i, std::size_t j) const { return gains_.at(i * n_ + j); }
  void set(std::size_t i, std::size_t j, GainFn g);

  /// Matrix with Linear(coeffs[i][j]) entries (zero coefficients become Zero).
  static GainMatrix from_linear(const std::vector<std::vector<double>>& coeffs);

 private:
  std::size_t n_;
  std::vector<GainFn> gains_;
};

/// Gamma_i(x) = max_j gamma_ij(x_j).
PlusVec gamma_apply(const GainMatrix& G, const PlusVec& x);

/// Q(x) = MAX{x, Gamma(x), ..., Gamma^(n-1)(x)}.
PlusVec q_operator(const GainMatrix& G, const PlusVec& x);

/// A simple cycle as 0-based node indices, smallest index first.
using Cycle = std::vector<std::size_t>;

/// Every simple cycle of the complete digraph on n nodes (self-loops
/// included), once per rotation class.
std::vector<Cycle> enumerate_cycles(std::size_t n);

/// gamma_{i1,i2} o gamma_{i2,i3} o ... o gamma_{ir,i1}.
GainFn cycle_gain(const GainMatrix& G, const Cycle& cycle);

std::string cycle_to_string(const Cycle& cycle);  // 1-based, e.g. "(1,2)"

struct CycleCheck {
  Cycle cycle;
  bool skipped_zero = false;             // composition is identically zero
  std::optional<ContractionVerdict> verdict;  // absent when skipped

  [[nodiscard]] bool holds() const { return skipped_zero || verdict->holds(); }
};

struct FailingCycle {
  Cycle cycle;
  double witness = 0.0;
};

struct SmallGainReport {
  bool holds = true;
  /// True when every checked cycle was decided by a closed-form rule.
  bool exact = true;
  std::vector<CycleCheck> cycles;
  std::optional<FailingCycle> failing_cycle;
};

SmallGainReport check_small_gain(const GainMatrix& G, const GridSpec& grid = {});

/// A nonzero x >= 0 with Gamma(x) >= x, built from a failing cycle and its
/// witness; nullopt if the construction does not verify numerically.
std::optional<PlusVec> cycle_witness_vector(const GainMatrix& G, const Cycle& cycle, double s);

struct WitnessSearchOptions {
  std::size_t samples = 100000;
  double radius = 1e6;
  std::uint64_t seed = 0;
};

/// Looks for x != 0 with Gamma(x) >= x: first the cycle construction for each
/// failing cycle, then log-uniform random sampling on [1e-6 r, r]^n.
std::optional<PlusVec> gas_witness_search(const GainMatrix& G, const WitnessSearchOptions& opts = {},
                                          const GridSpec& grid = {});

}  // namespace vsg
