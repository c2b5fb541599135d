#include <benchmark/benchmark.h>

#include <random>

#include "vsg/recipes.hpp"
#include "vsg/synthesis.hpp"

using namespace vsg;

namespace {

GainMatrix random_linear(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 0.9);
  std::vector<std::vector<double>> c(n, std::vector<double>(n));
  for (auto& row : c)
    for (auto& v : row) v = U(rng);
  return GainMatrix::from_linear(c);
}

void BM_EvalLogExpSqChain(benchmark::State& state) {
  const auto g = compose_chain({GainFn::logexpsq(0.5, 0.9), GainFn::logexpsq(0.5, 1.02), GainFn::linear(1.0),
                                GainFn::logexpsq(0.5, 1.02)});
  double s = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(g(s));
    s = s < 1e3 ? s * 1.01 : 1e-3;
  }
}
BENCHMARK(BM_EvalLogExpSqChain);

void BM_Simplify(benchmark::State& state) {
  std::vector<GainFn> chain;
  for (int k = 0; k < state.range(0); ++k)
    chain.push_back(k % 2 ? GainFn::power(0.7, 2.0) : GainFn::max(GainFn::linear(0.5), GainFn::power(0.3, 0.5)));
  const auto g = compose_chain(chain);
  for (auto _ : state) benchmark::DoNotOptimize(simplify(g));
}
BENCHMARK(BM_Simplify)->Arg(4)->Arg(16);

void BM_CheckSmallGainLinear(benchmark::State& state) {
  const auto G = random_linear(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(check_small_gain(G));
}
BENCHMARK(BM_CheckSmallGainLinear)->DenseRange(2, 6);

void BM_CheckSmallGainLogChain(benchmark::State& state) {
  const auto G = biochem_gains(static_cast<std::size_t>(state.range(0)), 0.9, 1.02);
  for (auto _ : state) benchmark::DoNotOptimize(check_small_gain(G));
}
BENCHMARK(BM_CheckSmallGainLogChain)->Arg(3)->Arg(5);

void BM_Theta(benchmark::State& state) {
  SynthesisInput inp;
  inp.gains = random_linear(static_cast<std::size_t>(state.range(0)), 2);
  inp.zeta = GainFn::linear(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(build_theta(inp));
}
BENCHMARK(BM_Theta)->DenseRange(2, 5);

void BM_DelayIntegration(benchmark::State& state) {
  SystemSpec spec;
  spec.kind = SystemKind::Delay;
  spec.model = std::make_shared<LinearDelayNetwork>(std::vector<double>{1.0, 1.0, 1.0},
                                                    Matrix{{0.5, 0.6, 0.6}, {0.6, 0.5, 0.6}, {0.6, 0.6, 0.5}}, 0.5);
  const auto hist = constant_history({1.0, -0.5, 0.25});
  for (auto _ : state) benchmark::DoNotOptimize(integrate_delay(spec, hist, 10.0, 1e-3));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_DelayIntegration)->Unit(benchmark::kMillisecond);

void BM_ImplicationSampling(benchmark::State& state) {
  LyapunovSetup setup;
  setup.gains = delay_network_gains({1.0, 1.0, 1.0}, {{0.5, 0.6, 0.6}, {0.6, 0.5, 0.6}, {0.6, 0.6, 0.5}}, 0.95);
  setup.rho.assign(3, RateFn::linear(0.1));
  SystemSpec spec;
  spec.kind = SystemKind::Delay;
  spec.model = std::make_shared<LinearDelayNetwork>(std::vector<double>{1.0, 1.0, 1.0},
                                                    Matrix{{0.5, 0.6, 0.6}, {0.6, 0.5, 0.6}, {0.6, 0.6, 0.5}}, 0.5);
  ImplicationOptions opts;
  opts.samples = 10000;
  for (auto _ : state) benchmark::DoNotOptimize(check_implication(setup, spec, opts));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_ImplicationSampling)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
