#pragma once

// Explicit closed-loop gain objects: the chain-max maps phi_i, the composite
// gain theta, the overall ISS gain a1^{-1} o theta, and the per-channel
// asymptotic gains G_i.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "vsg/gain.hpp"
#include "vsg/network.hpp"

namespace vsg {

struct SynthesisInput {
  GainMatrix gains{1};
  GainFn zeta;                    // input gain
  std::vector<GainFn> p;          // coupling gains p_i; empty means all zero
  GainFn a1 = GainFn::identity();  // lower comparison function, strictly increasing
  double M = 1.0;                 // sigma(s, 0) = M s

  void validate() const;
  [[nodiscard]] const GainFn& p_at(std::size_t i) const;

 private:
  static const GainFn& zero_gain();
};

class SmallGainNotEstablished : public std::runtime_error {
 public:
  SmallGainNotEstablished(const std::string& what, SmallGainReport report)
      : std::runtime_error(what), report_(std::move(report)) {}
  [[nodiscard]] const SmallGainReport& report() const { return report_; }

 private:
  SmallGainReport report_;
};

/// Every simple path (i, j1, ..., jl), l = 1..n-1, starting at `start`, as
/// 0-based node lists. Paths through zero gains are kept.
std::vector<std::vector<std::size_t>> simple_paths_from(std::size_t n, std::size_t start);

/// phi_i = Max(identity, all simple-path chain compositions from i). Runs the
/// small-gain check first and throws SmallGainNotEstablished if it fails.
std::vector<GainFn> build_phi(const GainMatrix& G, const GridSpec& grid = {});

/// Same, trusting a report the caller already obtained for G.
std::vector<GainFn> build_phi(const GainMatrix& G, const SmallGainReport& report);

/// p^u(s) = max{zeta(s), max_i p_i(zeta(s))}
GainFn build_pu(const SynthesisInput& inp);

/// G_i(s) = phi_i(max{M p^u(s), M p(phi_1(zeta(s)), ..., phi_n(zeta(s))), zeta(s)}) with
/// p(x) = max{max_ij gamma_ij(x_j), max_ij p_i(gamma_ij(x_j))}.
std::vector<GainFn> build_gmap(const SynthesisInput& inp, const std::vector<GainFn>& phi);

/// theta(s) = max_i G_i(s); for M = 1 this is the composite gain
///   max_i phi_i(max{max_i p_i(zeta), max_ij gamma_ij(phi_j(zeta)),
///                   max_ij p_i(gamma_ij(phi_j(zeta))), zeta}).
GainFn build_theta(const SynthesisInput& inp, const GridSpec& grid = {});

struct CompositeGain {
  std::vector<GainFn> phi;
  GainFn theta;
  GainFn a1;
  std::vector<GainFn> gmap;
  GainFn pu;

  /// a1^{-1}(theta(s)).
  [[nodiscard]] double overall(double s) const;
};

CompositeGain overall_gain(const SynthesisInput& inp, const GridSpec& grid = {});

}  // namespace vsg
