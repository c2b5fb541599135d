#include <CLI11.hpp>

#include <chrono>
#include <iostream>

#include "commands.hpp"
#include "vsg/recipes.hpp"

using namespace vsg;
using namespace vsg::cli;

int main(int argc, char** argv) {
  CLI::App app{"Vector small-gain analysis: check cyclic small-gain conditions, synthesize closed-loop gains, "
               "simulate and validate."};
  app.require_subcommand(1);

  std::string input;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  bool force = false;
  std::string recipe;

  auto add_common = [&](CLI::App* sub, bool needs_input) {
    if (needs_input) sub->add_option("-i,--input", input, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "seed for randomized sampling (overrides analysis.seed)");
    sub->add_option("-j,--jobs", jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_flag("--force", force, "overwrite existing output files");
  };

  auto* check_sg = app.add_subcommand("check-sg", "cyclic small-gain check of the gain matrix");
  auto* synth = app.add_subcommand("synth", "synthesize phi, theta and the overall gain");
  auto* iter = app.add_subcommand("iterate", "iterate x -> Gamma(x) from analysis.x0");
  auto* sim = app.add_subcommand("simulate", "integrate the system from analysis.x0");
  auto* val = app.add_subcommand("validate", "falsify the Lyapunov implication and check simulated tails");
  auto* repro = app.add_subcommand("repro", "run a pinned reproduction recipe");
  for (auto* sub : {check_sg, synth, iter, sim, val}) add_common(sub, true);
  add_common(repro, false);
  repro->add_option("name", recipe, "recipe name")->required();
  repro->footer([] {
    std::string s = "recipes:";
    for (const auto& n : recipe_names()) s += " " + n;
    return s;
  }());

  CLI11_PARSE(app, argc, argv);

  const auto started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  int code = kExitError;
  try {
    OutputDir out(out_dir, force);
    RunFlags flags{seed, jobs};
    if (repro->parsed()) {
      code = cmd_repro(recipe, out, flags);
    } else {
      auto cfg = load_config(input);
      if (seed) cfg.analysis.seed = *seed;
      if (check_sg->parsed()) code = cmd_check_sg(cfg, out);
      else if (synth->parsed()) code = cmd_synth(cfg, out);
      else if (iter->parsed()) code = cmd_iterate(cfg, out);
      else if (sim->parsed()) code = cmd_simulate(cfg, out);
      else code = cmd_validate(cfg, out, flags);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.write_json("run_info.json",
                   {{"started_at", started}, {"finished_at", utc_now()}, {"wall_seconds", secs}, {"exit_code", code}});
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return code;
}
