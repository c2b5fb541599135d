#include "vsg/synthesis.hpp"

#include <cmath>
#include <functional>

namespace vsg {

const GainFn& SynthesisInput::zero_gain() {
  static const GainFn z;
  return z;
}

const GainFn& SynthesisInput::p_at(std::size_t i) const { return p.empty() ? zero_gain() : p.at(i); }

void SynthesisInput::validate() const {
  if (!p.empty() && p.size() != gains.n())
    throw std::invalid_argument("synthesis: p list must be empty or have one entry per node");
  if (!(M >= 1.0) || !std::isfinite(M)) throw std::invalid_argument("synthesis: M must be finite and >= 1");
  if (!is_strictly_increasing(a1)) throw std::invalid_argument("synthesis: a1 must be strictly increasing");
}

std::vector<std::vector<std::size_t>> simple_paths_from(std::size_t n, std::size_t start) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> path{start};
  std::vector<bool> used(n, false);
  used[start] = true;
  std::function<void()> extend = [&] {
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      path.push_back(j);
      used[j] = true;
      out.push_back(path);
      extend();
      used[j] = false;
      path.pop_back();
    }
  };
  extend();
  return out;
}

std::vector<GainFn> build_phi(const GainMatrix& G, const GridSpec& grid) {
  return build_phi(G, check_small_gain(G, grid));
}

std::vector<GainFn> build_phi(const GainMatrix& G, const SmallGainReport& report) {
  if (!report.holds) {
    std::string msg = "build_phi: small-gain conditions not established";
    if (report.failing_cycle) msg += "; failing cycle " + cycle_to_string(report.failing_cycle->cycle);
    throw SmallGainNotEstablished(msg, report);
  }
  const std::size_t n = G.n();
  std::vector<GainFn> phi;
  phi.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<GainFn> branches{GainFn::identity()};
    for (const auto& path : simple_paths_from(n, i)) {
      std::vector<GainFn> chain;
      bool zero = false;
      for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const GainFn& g = G.at(path[k], path[k + 1]);
        if (g.is_zero()) zero = true;
        chain.push_back(g);
      }
      if (!zero) branches.push_back(compose_chain(chain));
    }
    phi.push_back(GainFn::max_of(std::move(branches)));
  }
  return phi;
}

namespace {

GainFn scaled(double M, GainFn g) { return M == 1.0 || g.is_zero() ? g : GainFn::scale(M, std::move(g)); }

// p(phi_1(zeta), ..., phi_n(zeta)) as a single gain in s.
GainFn coupling_branch(const SynthesisInput& inp, const std::vector<GainFn>& phi) {
  const std::size_t n = inp.gains.n();
  std::vector<GainFn> terms;
  for (std::size_t j = 0; j < n; ++j) {
    const GainFn phi_zeta = GainFn::compose(phi[j], inp.zeta);
    for (std::size_t i = 0; i < n; ++i) {
      const GainFn& g = inp.gains.at(i, j);
      if (g.is_zero()) continue;
      const GainFn g_phi_zeta = GainFn::compose(g, phi_zeta);
      terms.push_back(g_phi_zeta);
      if (!inp.p_at(i).is_zero()) terms.push_back(GainFn::compose(inp.p_at(i), g_phi_zeta));
    }
  }
  return GainFn::max_of(std::move(terms));
}

}  // namespace

GainFn build_pu(const SynthesisInput& inp) {
  std::vector<GainFn> terms{inp.zeta};
  for (std::size_t i = 0; i < inp.gains.n(); ++i) {
    if (!inp.p_at(i).is_zero()) terms.push_back(GainFn::compose(inp.p_at(i), inp.zeta));
  }
  return GainFn::max_of(std::move(terms));
}

std::vector<GainFn> build_gmap(const SynthesisInput& inp, const std::vector<GainFn>& phi) {
  inp.validate();
  if (phi.size() != inp.gains.n()) throw std::invalid_argument("build_gmap: phi has the wrong length");
  if (inp.zeta.is_zero()) return std::vector<GainFn>(inp.gains.n());
  std::vector<GainFn> args{scaled(inp.M, build_pu(inp))};
  GainFn coupling = coupling_branch(inp, phi);
  if (!coupling.is_zero()) args.push_back(scaled(inp.M, std::move(coupling)));
  if (inp.M != 1.0) args.push_back(inp.zeta);
  const GainFn inner = GainFn::max_of(std::move(args));
  std::vector<GainFn> out;
  out.reserve(phi.size());
  for (const auto& f : phi) out.push_back(GainFn::compose(f, inner));
  return out;
}

GainFn build_theta(const SynthesisInput& inp, const GridSpec& grid) {
  inp.validate();
  const auto phi = build_phi(inp.gains, grid);
  return GainFn::max_of(build_gmap(inp, phi));
}

double CompositeGain::overall(double s) const { return invert_auto(a1, theta.eval(s)); }

CompositeGain overall_gain(const SynthesisInput& inp, const GridSpec& grid) {
  inp.validate();
  CompositeGain out;
  out.phi = build_phi(inp.gains, grid);
  out.gmap = build_gmap(inp, out.phi);
  out.theta = inp.zeta.is_zero() ? GainFn::zero() : GainFn::max_of(out.gmap);
  out.a1 = inp.a1;
  out.pu = build_pu(inp);
  return out;
}

}  // namespace vsg
