#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "vsg/network.hpp"

using namespace vsg;

namespace {

std::size_t factorial(std::size_t k) { return k <= 1 ? 1 : k * factorial(k - 1); }
std::size_t binom(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Canonical rotation: smallest element first.
Cycle canon(Cycle c) {
  std::rotate(c.begin(), std::min_element(c.begin(), c.end()), c.end());
  return c;
}

}  // namespace

TEST_CASE("PlusVec validation and ordering") {
  CHECK_THROWS_AS(PlusVec({1.0, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(PlusVec({INFINITY}), std::invalid_argument);
  CHECK(leq(PlusVec{1.0, 2.0}, PlusVec{1.0, 3.0}));
  CHECK_FALSE(leq(PlusVec{1.0, 2.0}, PlusVec{0.5, 3.0}));
  CHECK_THROWS_AS(leq(PlusVec{1.0}, PlusVec{1.0, 2.0}), DimensionError);
  CHECK(vec_max(PlusVec{1.0, 5.0}, PlusVec{2.0, 3.0}) == PlusVec{2.0, 5.0});
  CHECK(PlusVec{0.0, 7.0, 3.0}.max_norm() == 7.0);
}

TEST_CASE("gamma_apply and q_operator on a hand example") {
  const GainMatrix G = GainMatrix::from_linear({{0.0, 0.5}, {2.0, 0.0}});
  CHECK(gamma_apply(G, PlusVec{1.0, 4.0}) == PlusVec{2.0, 2.0});
  // Q(x) = max{x, Gamma x} for n = 2
  CHECK(q_operator(G, PlusVec{1.0, 4.0}) == PlusVec{2.0, 4.0});
  CHECK_THROWS_AS(gamma_apply(G, PlusVec{1.0}), DimensionError);
}

TEST_CASE("cycle enumeration covers every rotation class once") {
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto cycles = enumerate_cycles(n);
    std::size_t expected = 0;
    for (std::size_t r = 1; r <= n; ++r) expected += binom(n, r) * factorial(r - 1);
    CHECK(cycles.size() == expected);
    std::set<Cycle> seen;
    for (const auto& c : cycles) {
      CHECK(c == canon(c));
      CHECK(std::set<std::size_t>(c.begin(), c.end()).size() == c.size());
      seen.insert(c);
    }
    CHECK(seen.size() == cycles.size());
  }
}

TEST_CASE("small gain: linear matrices against spectral intuition") {
  CHECK(check_small_gain(GainMatrix::from_linear({{0.9}})).holds);
  CHECK_FALSE(check_small_gain(GainMatrix::from_linear({{1.0}})).holds);
  const auto ok = check_small_gain(GainMatrix::from_linear({{0.5, 1.5}, {0.6, 0.0}}));
  CHECK(ok.holds);
  CHECK(ok.exact);
  const auto bad = check_small_gain(GainMatrix::from_linear({{0.5, 1.5}, {0.7, 0.0}}));
  CHECK_FALSE(bad.holds);
  REQUIRE(bad.failing_cycle);
  CHECK(bad.failing_cycle->cycle == Cycle{0, 1});
  CHECK(cycle_to_string(bad.failing_cycle->cycle) == "(1,2)");
}

TEST_CASE("cycles through zero entries are skipped") {
  GainMatrix G(3);
  G.set(0, 1, GainFn::linear(5.0));
  G.set(1, 2, GainFn::linear(5.0));
  const auto rep = check_small_gain(G);
  CHECK(rep.holds);
  for (const auto& c : rep.cycles) CHECK(c.skipped_zero);
}

TEST_CASE("cycle gain rotations give the same verdict (brute force)") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.2, 1.6);
  for (int trial = 0; trial < 100; ++trial) {
    GainMatrix G(4);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        switch ((i + j + trial) % 3) {
          case 0:
            G.set(i, j, GainFn::linear(u(rng)));
            break;
          case 1:
            G.set(i, j, GainFn::logexpsq(0.5, u(rng)));
            break;
          default:
            G.set(i, j, GainFn::max(GainFn::linear(u(rng) * 0.5), GainFn::logexpsq(0.4, u(rng))));
        }
      }
    }
    for (const auto& c : enumerate_cycles(4)) {
      const bool base = check_contraction(cycle_gain(G, c)).holds();
      Cycle rot = c;
      for (std::size_t k = 1; k < c.size(); ++k) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        CHECK(check_contraction(cycle_gain(G, rot)).holds() == base);
      }
    }
  }
}

TEST_CASE("witness vector from a failing cycle") {
  const GainMatrix G = GainMatrix::from_linear({{0.0, 1.2, 0.0}, {0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}});
  const auto rep = check_small_gain(G);
  REQUIRE_FALSE(rep.holds);
  const auto w = gas_witness_search(G);
  REQUIRE(w);
  CHECK(w->max_norm() > 0.0);
  CHECK(leq(*w, gamma_apply(G, *w)));
  CHECK_FALSE(gas_witness_search(GainMatrix::from_linear({{0.5, 0.9}, {0.9, 0.5}}), {1000, 1e6, 1}));
}
