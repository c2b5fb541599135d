#include <doctest.h>

#include <cmath>

#include "vsg/biochem.hpp"
#include "vsg/validation.hpp"

using namespace vsg;

namespace {

long double first_rate(long double s, long double a, long double lam, long double th, long double b) {
  const long double t = std::sqrt(2 * s);
  const long double e = std::exp(t) - 1;
  return a * t * std::min((1 - lam / th) * (1 - std::exp(-t)), (b + 1 - b / th) * e / (b + 1 + (b / th) * e));
}

long double chain_rate(long double s, long double a, long double mu) {
  const long double t = std::sqrt(2 * s);
  return (1 - 1 / mu) * a * t * (1 - std::exp(-t)) / (1 + (std::exp(t) - 1) / mu);
}

struct Scalar51 {
  LyapunovSetup setup;
  SystemSpec spec;

  explicit Scalar51(double shrink = 1.0) {
    const double a = 1.0, c = 0.5, lambda = 0.95;
    setup.gains = GainMatrix(1);
    setup.gains.set(0, 0, GainFn::linear(c * c / (lambda * lambda * a * a) / shrink));
    setup.rho = {RateFn::linear(2.0 * (1.0 - lambda) * a)};
    spec.kind = SystemKind::Delay;
    spec.model = std::make_shared<LinearDelayNetwork>(std::vector<double>{a}, Matrix{{c}}, 1.0);
  }
};

Trajectory synthetic(std::vector<double> times, std::vector<double> xs, std::vector<double> ht = {},
                     std::vector<double> hx = {}) {
  Trajectory t;
  t.t0 = times.front();
  t.times = std::move(times);
  for (double v : xs) t.states.push_back({v});
  t.history_times = std::move(ht);
  for (double v : hx) t.history.push_back({v});
  return t;
}

}  // namespace

TEST_CASE("biochemical rates against the direct formulas") {
  const auto r1 = RateFn::biochem_first(1.3, 0.3, 0.7, 0.5);
  const auto r2 = RateFn::biochem_chain(0.8, 1.1);
  for (double s : GridSpec{1e-6, 50.0, 200}.samples()) {
    CHECK(r1(s) == doctest::Approx(static_cast<double>(first_rate(s, 1.3L, 0.3L, 0.7L, 0.5L))).epsilon(1e-12));
    CHECK(r2(s) == doctest::Approx(static_cast<double>(chain_rate(s, 0.8L, 1.1L))).epsilon(1e-12));
  }
  CHECK(r1(0.0) == 0.0);
  CHECK(std::isfinite(r1(1e300)));
  CHECK(r1(1e300) > 0.0);
  CHECK(std::isfinite(r2(1e6)));
  CHECK(r2(1e6) >= 0.0);
  CHECK_THROWS_AS(RateFn::biochem_first(1.0, 0.8, 0.7, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(RateFn::biochem_chain(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("scalar delay network implication holds with the derived gains") {
  Scalar51 ex;
  ImplicationOptions opts;
  opts.samples = 20000;
  auto rep = check_implication(ex.setup, ex.spec, opts);
  CHECK(rep.samples == 20000);
  CHECK(rep.premise_points == 20000);
  CHECK(rep.evaluations > rep.premise_points);
  CHECK(rep.violation_count == 0);
}

TEST_CASE("shrunk gain is falsified and the violation replays") {
  Scalar51 ex(10.0);
  ImplicationOptions opts;
  opts.samples = 5000;
  opts.seed = 11;
  auto rep = check_implication(ex.setup, ex.spec, opts);
  REQUIRE(rep.falsified());
  CHECK(rep.violations.size() <= opts.max_reported);
  for (const auto& v : rep.violations) {
    auto again = check_point(ex.setup, ex.spec, v.sample);
    REQUIRE(again.has_value());
    CHECK(again->derivative == v.derivative);
    CHECK(again->derivative > again->bound);
  }
  // with the sound gains the same points either fail the premise or pass
  Scalar51 sound;
  for (const auto& v : rep.violations) CHECK_FALSE(check_point(sound.setup, sound.spec, v.sample).has_value());
}

TEST_CASE("check_point rejects malformed samples") {
  Scalar51 ex;
  ImplicationSample s;
  s.x = {1.0, 2.0};
  CHECK_THROWS_AS(check_point(ex.setup, ex.spec, s), std::invalid_argument);
}

TEST_CASE("zero dynamics with zero rates") {
  LyapunovSetup setup;
  setup.gains = GainMatrix(2);
  setup.rho = {RateFn::gain(GainFn::zero()), RateFn::gain(GainFn::zero())};
  SystemSpec spec;
  spec.model = std::make_shared<LinearOde>(Matrix{{0.0, 0.0}, {0.0, 0.0}});
  ImplicationOptions opts;
  opts.samples = 1000;
  auto rep = check_implication(setup, spec, opts);
  CHECK(rep.premise_points == 1000);
  CHECK(rep.violation_count == 0);
}

TEST_CASE("biochemical circuit implication in log coordinates") {
  const std::vector<double> a{1.0, 1.0, 1.0};
  const auto g = GCurve::hill(3.0, 1.0);
  const auto h = check_hypothesis_h(a, g);
  REQUIRE(h.holds());
  const double theta = 0.7, mu = 1.1;
  REQUIRE(theta > h.theta_lower());
  REQUIRE(mu * mu * theta < 1.0);

  LyapunovSetup setup;
  setup.gains = GainMatrix(3);
  setup.gains.set(0, 2, GainFn::logexpsq(0.5, theta));
  setup.gains.set(1, 0, GainFn::logexpsq(0.5, mu));
  setup.gains.set(2, 1, GainFn::logexpsq(0.5, mu));
  setup.rho = {RateFn::biochem_first(a[0], h.lambda, theta, h.b), RateFn::biochem_chain(a[1], mu),
               RateFn::biochem_chain(a[2], mu)};
  SystemSpec spec;
  spec.kind = SystemKind::Delay;
  spec.model = std::make_shared<BiochemLog>(a, std::vector<double>{0.3, 0.2, 0.5}, g, biochem_equilibrium(a, g));

  ImplicationOptions opts;
  opts.samples = 30000;
  auto rep = check_implication(setup, spec, opts);
  CHECK(rep.premise_points > 0);
  CHECK(rep.violation_count == 0);

  // a too-optimistic first rate is caught
  setup.rho[0] = RateFn::linear(4.0);
  CHECK(check_implication(setup, spec, opts).falsified());
}

TEST_CASE("sampled-data hold") {
  // x' = -2x + x(tau_i), |x(tau_i)| <= |x|: x f <= -x^2 = -2 Q
  LyapunovSetup setup;
  setup.gains = GainMatrix(1);
  setup.gains.set(0, 0, GainFn::identity());
  setup.rho = {RateFn::linear(1.9)};
  SystemSpec spec;
  spec.kind = SystemKind::SampledData;
  spec.model = std::make_shared<SampledLinear>(Matrix{{-2.0}}, Matrix{{1.0}});
  spec.h = SamplingPeriod::constant(0.2);
  ImplicationOptions opts;
  opts.samples = 10000;
  auto rep = check_implication(setup, spec, opts);
  CHECK(rep.premise_points == 10000);
  CHECK(rep.violation_count == 0);

  setup.rho = {RateFn::linear(2.5)};
  rep = check_implication(setup, spec, opts);
  REQUIRE(rep.falsified());
  const auto& s = rep.violations.front().sample;
  CHECK(std::abs(s.held[0] - s.x[0]) <= s.box[0]);
  CHECK(check_point(setup, spec, s).has_value());
}

TEST_CASE("lyapunov channels take the window sup") {
  auto t = synthetic({0.0, 0.5, 1.0, 1.5, 2.0}, {1.0, -3.0, 0.5, 0.2, 0.1}, {-1.0, -0.5}, {4.0, 0.0});
  auto V = lyapunov_channels(t, 1.0);
  REQUIRE(V.size() == 1);
  CHECK(V[0] == std::vector<double>{8.0, 4.5, 4.5, 4.5, 0.125});
  auto V0 = lyapunov_channels(t, 0.0);
  CHECK(V0[0][1] == 4.5);
  CHECK(V0[0][4] == 0.005000000000000001);
}

TEST_CASE("convergence verdicts") {
  std::vector<double> times, xs;
  for (int k = 0; k <= 200; ++k) {
    times.push_back(0.1 * k);
    xs.push_back(std::exp(-0.1 * k));
  }
  auto rep = check_convergence(synthetic(times, xs), 0.0);
  CHECK(rep.tail_start == doctest::Approx(16.0));
  CHECK(rep.all_converged());
  CHECK(rep.channels[0].tail_sup == doctest::Approx(0.5 * std::exp(-32.0)));

  rep = check_convergence(synthetic(times, xs), 0.0, 1e-20);
  CHECK_FALSE(rep.all_converged());

  CHECK_THROWS_AS(check_convergence(synthetic({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}), 0.0), InconclusiveError);
}

TEST_CASE("asymptotic gain against the steady state") {
  // x' = -x + 0.5 settles at 0.5, V -> 0.125
  SystemSpec spec;
  spec.model = std::make_shared<LinearOde>(Matrix{{-1.0}}, Matrix{{1.0}});
  spec.inputs = {Signal::constant(0.5)};
  auto traj = integrate_ode(spec, {2.0}, 40.0, 0.01);
  const double lambda = 0.9;
  auto rep = check_asymptotic_gain(traj, 0.0, {GainFn::power(1.0 / (2.0 * lambda * lambda), 2.0)}, spec.input_sup());
  CHECK(rep.all_satisfied());
  CHECK(rep.channels[0].tail_sup == doctest::Approx(0.125).epsilon(1e-6));
  CHECK(rep.channels[0].margin > 0.0);

  rep = check_asymptotic_gain(traj, 0.0, {GainFn::power(0.1, 2.0)}, spec.input_sup());
  CHECK_FALSE(rep.all_satisfied());
  CHECK_THROWS_AS(check_asymptotic_gain(traj, 0.0, {}, 0.5), std::invalid_argument);
}
