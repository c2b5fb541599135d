#include <doctest.h>

#include "vsg/iteration.hpp"

using namespace vsg;

TEST_CASE("iterate: convergence, stall and divergence") {
  const auto conv = iterate(GainMatrix::from_linear({{0.0, 0.5}, {0.5, 0.0}}), PlusVec{1.0, 1.0}, 200);
  CHECK(conv.status == IterationStatus::ConvergedToZero);
  CHECK(conv.final_norm < 1e-9);
  CHECK(conv.steps == 30);  // 0.5^30 < 1e-9 <= 0.5^29
  CHECK(conv.iterates.size() == conv.steps + 1);

  const auto stall = iterate(GainMatrix::from_linear({{1.0}}), PlusVec{2.0}, 50);
  CHECK(stall.status == IterationStatus::StalledAbove);
  CHECK(stall.final_norm == 2.0);

  const auto div = iterate(GainMatrix::from_linear({{10.0}}), PlusVec{1.0}, 50);
  CHECK(div.status == IterationStatus::Diverged);
  CHECK(div.steps == 13);

  const auto zero = iterate(GainMatrix::from_linear({{10.0}}), PlusVec{0.0}, 5);
  CHECK(zero.status == IterationStatus::ConvergedToZero);
  CHECK(zero.steps == 0);

  CHECK_THROWS_AS(iterate(GainMatrix(2), PlusVec{1.0}, 5), DimensionError);
}

TEST_CASE("nonlinear max-preserving map converges under small gain") {
  GainMatrix G(2);
  G.set(0, 1, GainFn::logexpsq(0.5, 0.9));
  G.set(1, 0, GainFn::logexpsq(0.5, 1.05));
  REQUIRE(check_small_gain(G).holds);
  const auto r = iterate(G, PlusVec{5.0, 0.1}, 5000);
  CHECK(r.status == IterationStatus::ConvergedToZero);
}

TEST_CASE("lemma oracle: sandwich and convergence") {
  const GainMatrix G = GainMatrix::from_linear({{0.2, 0.8}, {0.6, 0.1}});
  const PlusVec x{1.0, 1.0};
  REQUIRE(leq(gamma_apply(G, x), x));
  CHECK(lemma22_oracle(G, x, PlusVec{0.3, 0.9}));
  CHECK_THROWS_AS(lemma22_oracle(G, x, PlusVec{2.0, 0.0}), PreconditionError);
  const GainMatrix H = GainMatrix::from_linear({{1.5}});
  CHECK_THROWS_AS(lemma22_oracle(H, PlusVec{1.0}, PlusVec{0.5}), PreconditionError);
}

TEST_CASE("fixed point bound") {
  const GainMatrix G = GainMatrix::from_linear({{0.0, 0.5, 0.0}, {0.0, 0.0, 0.9}, {0.8, 0.0, 0.0}});
  const PlusVec a{1.0, 0.2, 3.0};
  const auto fp = least_fixed_point_vs_q(G, a, 1000);
  CHECK(fp.bounded);
  // max-linear with contraction: the fixed point is reached after finitely many steps and equals Q(a)
  CHECK(fp.fixed_point == fp.q_of_a);
  CHECK(prop29_bound_check(G, a, 1000));
  CHECK_THROWS_AS(least_fixed_point_vs_q(GainMatrix::from_linear({{1.1}}), PlusVec{1.0}, 50), InconclusiveError);
}
