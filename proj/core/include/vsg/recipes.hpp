#pragma once

// End-to-end reproduction runs with pinned parameters. Each returns a
// structured result; `run_recipe` wraps them for the command line.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vsg/biochem.hpp"
#include "vsg/validation.hpp"

namespace vsg {

struct RecipeOptions {
  std::uint64_t seed = 0;
  unsigned jobs = 1;  // worker threads; results do not depend on it
};

// --- equivalence sweep: small-gain verdict versus iteration ---------------

struct SweepCase {
  std::size_t index = 0;
  std::size_t n = 0;
  bool small_gain = false;
  bool iteration_converged = false;  // every start reached tol within the step budget
  std::size_t worst_steps = 0;       // steps used by the slowest start
  double max_cycle_product = 0.0;
};

struct SweepResult {
  std::size_t agree = 0;
  std::vector<SweepCase> cases;
  [[nodiscard]] std::size_t disagree() const { return cases.size() - agree; }
};

struct SweepOptions {
  std::size_t matrices = 500;
  double coeff_max = 1.5;
  std::size_t starts = 20;
  std::size_t steps = 200;
  double tol = 1e-8;
};

SweepResult prop27_sweep(const SweepOptions& sweep, const RecipeOptions& opts = {});

// --- RK4 order -------------------------------------------------------------

struct OrderResult {
  std::vector<double> dts;
  std::vector<double> errors;     // |x(1) - e^-1|
  std::vector<double> error_orders;  // log2 of successive error ratios
  double richardson_order = 0.0;  // log2((x_h - x_h/2) / (x_h/2 - x_h/4))
  [[nodiscard]] bool passed(double lo = 3.5, double hi = 4.5) const;
};

OrderResult rk4_order(double dt = 1e-2);

// --- delay network ----------------------------------------------------------

struct HistoryRun {
  double initial_norm = 0.0;
  double final_norm = 0.0;  // infinity on finite escape
  bool escaped = false;
  bool converged = false;   // every Lyapunov channel below the tail tolerance
};

struct Example51Result {
  std::vector<double> a;
  Matrix c;
  double r = 0.5;
  double lambda = 0.95;
  SmallGainReport small_gain;
  std::vector<HistoryRun> runs;
  Matrix converse_c;
  SmallGainReport converse_small_gain;
  std::vector<HistoryRun> converse_runs;
  std::optional<Trajectory> sample;  // first history of the stable instance

  [[nodiscard]] bool stable_part_passed(double ratio = 1e-4) const;
  [[nodiscard]] bool converse_part_passed() const;
  [[nodiscard]] bool passed() const { return stable_part_passed() && converse_part_passed(); }
};

/// Gain matrix gamma_ij(s) = c_ij^2 / (lambda^2 a_i^2) s.
GainMatrix delay_network_gains(const std::vector<double>& a, const Matrix& c, double lambda);

Example51Result example51(const RecipeOptions& opts = {}, double horizon = 60.0, double dt = 1e-3,
                          std::size_t histories = 10);

// --- biochemical circuit ----------------------------------------------------

struct Example52Result {
  std::vector<double> a, tau;
  HypothesisReport hypothesis;
  std::vector<double> xstar;
  double theta = 0.7;
  double mu = 1.1;
  SmallGainReport small_gain;
  LyapunovSetup lyapunov;
  ImplicationReport implication;
  std::vector<double> final_rel_error;  // per history, max over components
  std::vector<double> tail_v;           // per history, max over channels
  double min_component = 0.0;           // positivity margin over all runs
  std::optional<Trajectory> sample;

  [[nodiscard]] bool passed(double rel = 1e-3, double tol_v = kTolTail) const;
};

/// gamma_{1,n} = LogExpSq(1/2, theta), gamma_{i,i-1} = LogExpSq(1/2, mu).
GainMatrix biochem_gains(std::size_t n, double theta, double mu);

Example52Result example52(const RecipeOptions& opts = {}, double horizon = 80.0, double dt = 0.01,
                          std::size_t histories = 10, std::size_t implication_samples = 20000);

// --- command-line wrapper ---------------------------------------------------

struct RecipeReport {
  std::string name;
  bool passed = false;
  nlohmann::json details;
  std::vector<std::string> summary;
  std::optional<Trajectory> trajectory;
};

const std::vector<std::string>& recipe_names();

/// Throws std::invalid_argument for an unknown name.
RecipeReport run_recipe(const std::string& name, const RecipeOptions& opts = {});

}  // namespace vsg
