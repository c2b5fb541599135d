#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "vsg/synthesis.hpp"

using namespace vsg;

namespace {

// phi_i(s) by brute force over all index sequences (repeats allowed) of
// length 1..n-1, plus the identity.
double phi_all_chains(const GainMatrix& G, std::size_t i, double s) {
  const std::size_t n = G.n();
  double best = s;
  std::function<void(std::size_t, std::size_t, std::vector<std::size_t>&)> rec =
      [&](std::size_t at, std::size_t depth, std::vector<std::size_t>& seq) {
        if (depth > 0) {
          double v = s;
          for (std::size_t k = seq.size(); k-- > 0;) {
            const std::size_t from = k == 0 ? i : seq[k - 1];
            v = G.at(from, seq[k])(v);
          }
          best = std::max(best, v);
        }
        if (depth == n - 1) return;
        for (std::size_t j = 0; j < n; ++j) {
          seq.push_back(j);
          rec(j, depth + 1, seq);
          seq.pop_back();
        }
        (void)at;
      };
  std::vector<std::size_t> seq;
  rec(i, 0, seq);
  return best;
}

double theta_direct(const SynthesisInput& inp, double s) {
  const std::size_t n = inp.gains.n();
  const double z = inp.zeta(s);
  std::vector<double> phz(n);
  for (std::size_t j = 0; j < n; ++j) phz[j] = phi_all_chains(inp.gains, j, z);
  double inner = z;
  for (std::size_t i = 0; i < n; ++i) {
    inner = std::max(inner, inp.p_at(i)(z));
    for (std::size_t j = 0; j < n; ++j) {
      const double gv = inp.gains.at(i, j)(phz[j]);
      inner = std::max({inner, gv, inp.p_at(i)(gv)});
    }
  }
  double out = 0.0;
  for (std::size_t i = 0; i < n; ++i) out = std::max(out, phi_all_chains(inp.gains, i, inner));
  return out;
}

GainMatrix random_contracting(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.5);
  while (true) {
    std::vector<std::vector<double>> c(n, std::vector<double>(n));
    for (auto& row : c)
      for (auto& e : row) e = u(rng);
    auto G = GainMatrix::from_linear(c);
    if (check_small_gain(G).holds) return G;
  }
}

}  // namespace

TEST_CASE("simple paths") {
  CHECK(simple_paths_from(1, 0).empty());
  CHECK(simple_paths_from(3, 0).size() == 4);  // 2 of length 1, 2 of length 2
  CHECK(simple_paths_from(4, 2).size() == 3 + 6 + 6);
}

TEST_CASE("build_phi examples") {
  const auto phi1 = build_phi(GainMatrix(1));
  CHECK(phi1[0](3.0) == 3.0);

  GainMatrix G(2);
  G.set(0, 1, GainFn::linear(0.5));
  const auto phi = build_phi(G);
  for (double s : {0.0, 0.7, 5.0}) {
    CHECK(phi[0](s) == s);
    CHECK(phi[1](s) == s);
  }

  CHECK_THROWS_AS(build_phi(GainMatrix::from_linear({{0.0, 2.0}, {0.6, 0.0}})), SmallGainNotEstablished);
}

TEST_CASE("phi agrees with brute force over all chains") {
  std::mt19937_64 rng(5);
  for (std::size_t n = 2; n <= 4; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      const GainMatrix G = random_contracting(rng, n);
      const auto phi = build_phi(G);
      for (double s : {1e-3, 0.4, 2.0, 90.0}) {
        for (std::size_t i = 0; i < n; ++i) CHECK(phi[i](s) == doctest::Approx(phi_all_chains(G, i, s)).epsilon(1e-13));
      }
    }
  }

  // Cyclic structure of the biochemical example.
  GainMatrix G(3);
  G.set(0, 2, GainFn::logexpsq(0.5, 0.7));
  G.set(1, 0, GainFn::logexpsq(0.5, 1.1));
  G.set(2, 1, GainFn::logexpsq(0.5, 1.1));
  const auto phi = build_phi(G);
  for (double s : {1e-4, 0.1, 3.0, 40.0}) {
    for (std::size_t i = 0; i < 3; ++i) CHECK(phi[i](s) == doctest::Approx(phi_all_chains(G, i, s)).epsilon(1e-12));
  }
}

TEST_CASE("theta examples") {
  SynthesisInput inp;
  inp.gains = GainMatrix(2);
  inp.zeta = GainFn::zero();
  CHECK(build_theta(inp)(5.0) == 0.0);

  inp.zeta = GainFn::power(2.0, 2.0);
  CHECK(build_theta(inp)(3.0) == 18.0);

  inp.zeta = GainFn::identity();
  inp.gains = GainMatrix::from_linear({{0.0, 0.5}, {0.5, 0.0}});
  CHECK(build_theta(inp)(1.0) == 1.0);
}

TEST_CASE("theta matches direct evaluation with coupling gains and M") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t n = 1; n <= 4; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      SynthesisInput inp;
      inp.gains = random_contracting(rng, n);
      inp.zeta = GainFn::linear(0.5 + u(rng));
      for (std::size_t i = 0; i < n; ++i) inp.p.push_back(GainFn::power(u(rng), 1.0 + u(rng)));
      const GainFn theta = build_theta(inp);
      for (double s : {1e-2, 0.5, 3.0}) CHECK(theta(s) == doctest::Approx(theta_direct(inp, s)).epsilon(1e-12));
      const auto cg = overall_gain(inp);
      for (std::size_t i = 0; i < n; ++i) {
        for (double s : {0.1, 2.0}) CHECK(cg.gmap[i](s) >= inp.zeta(s));
      }
    }
  }

  SynthesisInput inp;
  inp.gains = GainMatrix::from_linear({{0.0, 0.5}, {0.5, 0.0}});
  inp.zeta = GainFn::identity();
  inp.M = 3.0;
  const auto cg = overall_gain(inp);
  CHECK(cg.theta(1.0) == doctest::Approx(3.0));
}

TEST_CASE("overall gain inverts a1") {
  SynthesisInput inp;
  inp.gains = GainMatrix::from_linear({{0.1, 0.0, 0.0}, {0.0, 0.1, 0.0}, {0.0, 0.0, 0.1}});
  inp.zeta = GainFn::identity();
  inp.a1 = GainFn::power(1.0 / 6.0, 2.0);
  const auto cg = overall_gain(inp);
  for (double s : {0.0, 0.5, 6.0, 100.0}) CHECK(cg.overall(s) == doctest::Approx(std::sqrt(6.0 * s)));

  inp.zeta = GainFn::zero();
  CHECK(overall_gain(inp).overall(4.0) == 0.0);

  inp.a1 = GainFn::zero();
  CHECK_THROWS_AS(overall_gain(inp), std::invalid_argument);
  inp.a1 = GainFn::identity();
  inp.M = 0.5;
  CHECK_THROWS_AS(overall_gain(inp), std::invalid_argument);
}
