#include "vsg/recipes.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "vsg/json_io.hpp"

namespace vsg {

namespace {

// Runs f(k) for k < count on up to `jobs` threads; each k writes its own slot.
template <class F>
void parallel_for(std::size_t count, unsigned jobs, F&& f) {
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
  if (workers == 1) {
    for (std::size_t k = 0; k < count; ++k) f(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex m;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++) {
        try {
          f(k);
        } catch (...) {
          std::lock_guard lock(m);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t k) { return std::mt19937_64(mix64(seed ^ mix64(k))); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------

SweepResult prop27_sweep(const SweepOptions& sw, const RecipeOptions& opts) {
  SweepResult res;
  res.cases.resize(sw.matrices);
  parallel_for(sw.matrices, opts.jobs, [&](std::size_t k) {
    auto rng = stream(opts.seed, k);
    std::uniform_real_distribution<double> coeff(0.0, sw.coeff_max);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t n = 2 + std::uniform_int_distribution<std::size_t>(0, 2)(rng);
    Matrix c(n, std::vector<double>(n));
    for (auto& row : c)
      for (auto& v : row) v = coeff(rng);
    const auto G = GainMatrix::from_linear(c);

    SweepCase sc;
    sc.index = k;
    sc.n = n;
    sc.small_gain = check_small_gain(G).holds;
    for (const auto& cyc : enumerate_cycles(n)) sc.max_cycle_product = std::max(sc.max_cycle_product, cycle_gain(G, cyc)(1.0));
    sc.iteration_converged = true;
    for (std::size_t s = 0; s < sw.starts; ++s) {
      std::vector<double> x0(n);
      for (auto& v : x0) v = unit(rng);
      const auto it = iterate(G, PlusVec(x0), sw.steps, sw.tol);
      sc.worst_steps = std::max(sc.worst_steps, it.steps);
      if (it.status != IterationStatus::ConvergedToZero) sc.iteration_converged = false;
    }
    res.cases[k] = sc;
  });
  for (const auto& c : res.cases) res.agree += c.small_gain == c.iteration_converged;
  return res;
}

// ---------------------------------------------------------------------------

bool OrderResult::passed(double lo, double hi) const {
  return richardson_order >= lo && richardson_order <= hi;
}

OrderResult rk4_order(double dt) {
  OrderResult res;
  SystemSpec spec;
  spec.model = std::make_shared<LinearOde>(Matrix{{-1.0}});
  std::vector<double> xs;
  for (double h : {dt, dt / 2.0, dt / 4.0}) {
    const double x = integrate_ode(spec, {1.0}, 1.0, h).final_state()[0];
    res.dts.push_back(h);
    xs.push_back(x);
    res.errors.push_back(std::abs(x - std::exp(-1.0)));
  }
  for (std::size_t k = 0; k + 1 < res.errors.size(); ++k)
    res.error_orders.push_back(std::log2(res.errors[k] / res.errors[k + 1]));
  res.richardson_order = std::log2((xs[0] - xs[1]) / (xs[1] - xs[2]));
  return res;
}

// ---------------------------------------------------------------------------

GainMatrix delay_network_gains(const std::vector<double>& a, const Matrix& c, double lambda) {
  const std::size_t n = a.size();
  GainMatrix G(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (c[i][j] != 0.0) G.set(i, j, GainFn::linear(c[i][j] * c[i][j] / (lambda * lambda * a[i] * a[i])));
  return G;
}

bool Example51Result::stable_part_passed(double ratio) const {
  if (!small_gain.holds || runs.empty()) return false;
  return std::all_of(runs.begin(), runs.end(), [&](const HistoryRun& h) {
    return !h.escaped && h.final_norm < ratio * h.initial_norm && h.converged;
  });
}

bool Example51Result::converse_part_passed() const {
  if (converse_small_gain.holds) return false;
  return std::any_of(converse_runs.begin(), converse_runs.end(),
                     [](const HistoryRun& h) { return h.escaped || h.final_norm >= h.initial_norm; });
}

namespace {

std::vector<HistoryRun> run_histories(const SystemSpec& spec, const std::vector<History>& hs, double horizon,
                                      double dt, double r, unsigned jobs, std::optional<Trajectory>* keep) {
  std::vector<HistoryRun> runs(hs.size());
  std::vector<std::optional<Trajectory>> first(1);
  parallel_for(hs.size(), jobs, [&](std::size_t k) {
    HistoryRun run;
    const auto q = static_cast<std::size_t>(std::llround(r / dt));
    for (std::size_t m = 0; m <= q; ++m) {
      for (double v : hs[k](-static_cast<double>(q - m) * dt)) run.initial_norm = std::max(run.initial_norm, std::abs(v));
    }
    try {
      auto traj = integrate_delay(spec, hs[k], horizon, dt);
      run.final_norm = traj.max_norm(traj.size() - 1);
      run.converged = check_convergence(traj, r).all_converged();
      if (k == 0) first[0] = std::move(traj);
    } catch (const FiniteEscapeError&) {
      run.escaped = true;
      run.final_norm = std::numeric_limits<double>::infinity();
    }
    runs[k] = run;
  });
  if (keep) *keep = std::move(first[0]);
  return runs;
}

}  // namespace

Example51Result example51(const RecipeOptions& opts, double horizon, double dt, std::size_t histories) {
  Example51Result res;
  res.a = {1.0, 1.0, 1.0};
  // every cycle product of c is at most 0.6 of the matching product of a
  res.c = {{0.5, 0.6, 0.6}, {0.6, 0.5, 0.6}, {0.6, 0.6, 0.5}};
  res.small_gain = check_small_gain(delay_network_gains(res.a, res.c, res.lambda));

  std::vector<History> hs;
  auto rng = stream(opts.seed, 51);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_real_distribution<double> freq(1.0, 10.0);
  for (std::size_t k = 0; k < histories; ++k) {
    std::vector<double> A(3), B(3), w(3);
    for (std::size_t i = 0; i < 3; ++i) {
      A[i] = amp(rng);
      B[i] = 0.5 * amp(rng);
      w[i] = freq(rng);
    }
    hs.push_back([A, B, w](double t) {
      std::vector<double> x(3);
      for (std::size_t i = 0; i < 3; ++i) x[i] = A[i] + B[i] * std::sin(w[i] * t);
      return x;
    });
  }

  SystemSpec spec;
  spec.kind = SystemKind::Delay;
  spec.model = std::make_shared<LinearDelayNetwork>(res.a, res.c, res.r);
  res.runs = run_histories(spec, hs, horizon, dt, res.r, opts.jobs, &res.sample);

  // 2-cycle with c_12 c_21 = 1.2 a_1 a_2
  const double k = std::sqrt(1.2);
  res.converse_c = {{0.0, k, 0.0}, {k, 0.0, 0.0}, {0.0, 0.0, 0.0}};
  res.converse_small_gain = check_small_gain(delay_network_gains(res.a, res.converse_c, res.lambda));
  spec.model = std::make_shared<LinearDelayNetwork>(res.a, res.converse_c, res.r);
  res.converse_runs = run_histories(spec, hs, horizon, dt, res.r, opts.jobs, nullptr);
  return res;
}

// ---------------------------------------------------------------------------

GainMatrix biochem_gains(std::size_t n, double theta, double mu) {
  GainMatrix G(n);
  G.set(0, n - 1, GainFn::logexpsq(0.5, theta));
  for (std::size_t i = 1; i < n; ++i) G.set(i, i - 1, GainFn::logexpsq(0.5, mu));
  return G;
}

bool Example52Result::passed(double rel, double tol_v) const {
  if (!hypothesis.holds() || !small_gain.holds || implication.falsified() || final_rel_error.empty()) return false;
  if (!(min_component > 0.0)) return false;
  return std::all_of(final_rel_error.begin(), final_rel_error.end(), [&](double e) { return e <= rel; }) &&
         std::all_of(tail_v.begin(), tail_v.end(), [&](double v) { return v < tol_v; });
}

Example52Result example52(const RecipeOptions& opts, double horizon, double dt, std::size_t histories,
                          std::size_t implication_samples) {
  Example52Result res;
  const std::size_t n = 3;
  res.a = {1.0, 1.0, 1.0};
  res.tau = {0.3, 0.2, 0.5};
  const auto g = GCurve::hill(3.0, 1.0);
  res.hypothesis = check_hypothesis_h(res.a, g);
  if (!res.hypothesis.holds()) throw HypothesisError(res.hypothesis.detail);
  res.xstar = biochem_equilibrium(res.a, g);
  if (!(res.theta > res.hypothesis.theta_lower()) || !(res.mu < std::pow(res.theta, -1.0 / (n - 1.0))))
    throw HypothesisError("example52: pinned theta, mu fall outside the admissible windows");

  const auto G = biochem_gains(n, res.theta, res.mu);
  res.small_gain = check_small_gain(G);
  res.lyapunov.gains = G;
  res.lyapunov.rho = {RateFn::biochem_first(res.a[0], res.hypothesis.lambda, res.theta, res.hypothesis.b)};
  for (std::size_t i = 1; i < n; ++i) res.lyapunov.rho.push_back(RateFn::biochem_chain(res.a[i], res.mu));

  SystemSpec logspec;
  logspec.kind = SystemKind::Delay;
  logspec.model = std::make_shared<BiochemLog>(res.a, res.tau, g, res.xstar);
  ImplicationOptions io;
  io.samples = implication_samples;
  io.seed = opts.seed;
  res.implication = check_implication(res.lyapunov, logspec, io);

  SystemSpec spec;
  spec.kind = SystemKind::Delay;
  spec.model = std::make_shared<BiochemCircuit>(res.a, res.tau, g);
  const double r = *std::max_element(res.tau.begin(), res.tau.end());

  auto rng = stream(opts.seed, 52);
  std::uniform_real_distribution<double> lvl(-1.5, 1.5);
  std::uniform_real_distribution<double> freq(1.0, 10.0);
  std::vector<History> hs;
  for (std::size_t k = 0; k < histories; ++k) {
    std::vector<double> A(n), B(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
      A[i] = lvl(rng);
      B[i] = 0.3 * lvl(rng);
      w[i] = freq(rng);
    }
    hs.push_back([A, B, w, xs = res.xstar](double t) {
      std::vector<double> X(A.size());
      for (std::size_t i = 0; i < A.size(); ++i) X[i] = xs[i] * std::exp(A[i] + B[i] * std::sin(w[i] * t));
      return X;
    });
  }

  res.final_rel_error.assign(histories, 0.0);
  res.tail_v.assign(histories, 0.0);
  std::vector<double> mins(histories, std::numeric_limits<double>::infinity());
  std::vector<std::optional<Trajectory>> first(1);
  parallel_for(histories, opts.jobs, [&](std::size_t k) {
    auto traj = integrate_delay(spec, hs[k], horizon, dt);
    for (const auto& s : traj.states)
      for (double v : s) mins[k] = std::min(mins[k], v);
    const auto& fin = traj.final_state();
    for (std::size_t i = 0; i < n; ++i)
      res.final_rel_error[k] = std::max(res.final_rel_error[k], std::abs(fin[i] - res.xstar[i]) / res.xstar[i]);
    const auto conv = check_convergence(log_transform(traj, res.xstar), r);
    for (const auto& c : conv.channels) res.tail_v[k] = std::max(res.tail_v[k], c.tail_sup);
    if (k == 0) first[0] = std::move(traj);
  });
  res.min_component = *std::min_element(mins.begin(), mins.end());
  res.sample = std::move(first[0]);
  return res;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& recipe_names() {
  static const std::vector<std::string> names{"example51", "example52", "prop27-sweep", "rk4-order"};
  return names;
}

namespace {

nlohmann::json runs_json(const std::vector<HistoryRun>& runs) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& h : runs)
    out.push_back({{"initial_norm", h.initial_norm},
                   {"final_norm", h.escaped ? nlohmann::json(nullptr) : nlohmann::json(h.final_norm)},
                   {"escaped", h.escaped},
                   {"converged", h.converged}});
  return out;
}

}  // namespace

RecipeReport run_recipe(const std::string& name, const RecipeOptions& opts) {
  using json_io::to_json;
  RecipeReport rep;
  rep.name = name;
  if (name == "prop27-sweep") {
    const SweepOptions sw;
    const auto res = prop27_sweep(sw, opts);
    nlohmann::json dis = nlohmann::json::array();
    for (const auto& c : res.cases) {
      if (c.small_gain == c.iteration_converged) continue;
      dis.push_back({{"index", c.index},
                     {"n", c.n},
                     {"small_gain", c.small_gain},
                     {"iteration_converged", c.iteration_converged},
                     {"worst_steps", c.worst_steps},
                     {"max_cycle_product", c.max_cycle_product}});
    }
    rep.passed = res.disagree() == 0;
    rep.details = {{"matrices", sw.matrices}, {"starts", sw.starts}, {"steps", sw.steps}, {"tol", sw.tol},
                   {"agree", res.agree},      {"disagreements", dis}};
    rep.summary.push_back("agreement " + std::to_string(res.agree) + "/" + std::to_string(sw.matrices));
    if (!dis.empty())
      rep.summary.push_back(std::to_string(dis.size()) + " small-gain matrices need more than " +
                            std::to_string(sw.steps) + " steps to reach tol");
  } else if (name == "rk4-order") {
    const auto res = rk4_order();
    rep.passed = res.passed();
    rep.details = {{"dts", res.dts},
                   {"errors", res.errors},
                   {"error_orders", res.error_orders},
                   {"richardson_order", res.richardson_order}};
    rep.summary.push_back("richardson order " + fmt(res.richardson_order) + " (accepted range [3.5, 4.5])");
  } else if (name == "example51") {
    auto res = example51(opts);
    rep.passed = res.passed();
    rep.details = {{"a", res.a},
                   {"c", res.c},
                   {"r", res.r},
                   {"lambda", res.lambda},
                   {"small_gain", to_json(res.small_gain)},
                   {"runs", runs_json(res.runs)},
                   {"converse_c", res.converse_c},
                   {"converse_small_gain", to_json(res.converse_small_gain)},
                   {"converse_runs", runs_json(res.converse_runs)}};
    rep.summary.push_back(std::string("small gain ") + (res.small_gain.holds ? "holds" : "fails"));
    double worst = 0.0;
    for (const auto& h : res.runs) worst = std::max(worst, h.final_norm / h.initial_norm);
    rep.summary.push_back("worst final/initial norm ratio " + fmt(worst));
    rep.summary.push_back(std::string("converse: small gain ") + (res.converse_small_gain.holds ? "holds" : "fails") +
                          ", non-decaying run " + (res.converse_part_passed() ? "found" : "not found"));
    rep.trajectory = std::move(res.sample);
  } else if (name == "example52") {
    auto res = example52(opts);
    rep.passed = res.passed();
    rep.details = {{"a", res.a},
                   {"tau", res.tau},
                   {"xstar", res.xstar},
                   {"K", res.hypothesis.K},
                   {"lambda", res.hypothesis.lambda},
                   {"b", res.hypothesis.b},
                   {"theta", res.theta},
                   {"mu", res.mu},
                   {"small_gain", to_json(res.small_gain)},
                   {"implication", to_json(res.implication)},
                   {"final_rel_error", res.final_rel_error},
                   {"tail_v", res.tail_v},
                   {"min_component", res.min_component}};
    rep.summary.push_back("X* = (" + fmt(res.xstar[0]) + ", " + fmt(res.xstar[1]) + ", " + fmt(res.xstar[2]) +
                          "), K = " + fmt(res.hypothesis.K) + ", lambda = " + fmt(res.hypothesis.lambda));
    rep.summary.push_back(std::string("small gain ") + (res.small_gain.holds ? "holds" : "fails") +
                          ", implication violations " + std::to_string(res.implication.violation_count));
    rep.summary.push_back(
        "worst final relative error " +
        fmt(*std::max_element(res.final_rel_error.begin(), res.final_rel_error.end())) + ", worst tail V " +
        fmt(*std::max_element(res.tail_v.begin(), res.tail_v.end())));
    rep.trajectory = std::move(res.sample);
  } else {
    std::string list;
    for (const auto& n : recipe_names()) list += (list.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown recipe '" + name + "'; available: " + list);
  }
  return rep;
}

}  // namespace vsg
