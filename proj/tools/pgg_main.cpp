// Command-line driver: run, sweep, pii, thresholds, snapshot.
//
// Settings are resolved in order: --recipe, then --config FILE, then flags.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pgg/experiment.hpp"

namespace {

const std::vector<std::pair<std::string, std::string>> kSettingFlags = {
    {"net", "Network kind: lattice | ba"},
    {"side", "Lattice side length"},
    {"n", "BA agent count"},
    {"m0", "BA seed clique size"},
    {"m", "BA edges per new vertex"},
    {"r", "Interest rate(s): x, a,b,c or lo:step:hi"},
    {"alpha", "Investment strategy value(s)"},
    {"tau", "Cost of state change"},
    {"kappa", "Imitation noise"},
    {"generations", "Generations per run"},
    {"transient", "Generations discarded before averaging"},
    {"init_coop", "Initial cooperator density"},
    {"update", "Scheduler: sync | async"},
    {"seed", "Master seed"},
    {"realizations", "Runs per grid point"},
    {"workers", "Worker threads (0 = all cores)"},
    {"out", "Output directory"},
    {"pii_r", "Interest rate for self-return tables"},
    {"epsilon", "Extinction tolerance for thresholds"},
    {"refinements", "Bisection steps per threshold"},
};

struct ExperimentOptions {
  std::string recipe;
  std::string config;
  bool gnuplot = false;
  std::map<std::string, std::string> flags;
};

void add_experiment_options(CLI::App* cmd, ExperimentOptions& opts) {
  cmd->add_option("--recipe", opts.recipe, "Built-in parameter set: fig1..fig5");
  cmd->add_option("--config", opts.config, "key = value configuration file");
  cmd->add_flag("--gnuplot", opts.gnuplot, "Emit a gnuplot script next to each CSV");
  for (const auto& [key, help] : kSettingFlags) cmd->add_option("--" + key, opts.flags[key], help);
}

pgg::ExperimentSpec resolve(const CLI::App* cmd, const ExperimentOptions& opts) {
  pgg::ExperimentSpec spec = opts.recipe.empty() ? pgg::ExperimentSpec{} : pgg::recipe(opts.recipe);
  if (!opts.config.empty()) pgg::load_config_file(spec, opts.config);
  for (const auto& [key, help] : kSettingFlags) {
    if (cmd->count("--" + key) > 0) pgg::apply_setting(spec, key, opts.flags.at(key));
  }
  if (opts.gnuplot) spec.gnuplot = true;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Public goods game with preferential investment on networks"};
  app.require_subcommand(1);

  ExperimentOptions run_opts, sweep_opts, pii_opts, thr_opts;
  auto* run = app.add_subcommand("run", "Single run: trajectory.csv, final_state.csv");
  auto* sweep = app.add_subcommand("sweep", "Parallel (alpha, r) sweep: sweep.csv");
  auto* pii = app.add_subcommand("pii", "Static self-return tables: pii.csv, group_size.csv, pii_fraction.csv");
  auto* thr = app.add_subcommand("thresholds", "Locate r_C and r_D: thresholds.csv");
  add_experiment_options(run, run_opts);
  add_experiment_options(sweep, sweep_opts);
  add_experiment_options(pii, pii_opts);
  add_experiment_options(thr, thr_opts);

  std::string state_file, pgm_out = "snapshot.pgm";
  std::size_t side = 0;
  auto* snap = app.add_subcommand("snapshot", "Render a lattice state file as a binary PGM");
  snap->add_option("state_file", state_file, "final_state.csv")->required();
  snap->add_option("--side", side, "Lattice side length")->required();
  snap->add_option("--out", pgm_out, "Output PGM path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) pgg::cmd_run(resolve(run, run_opts));
    else if (*sweep) pgg::cmd_sweep(resolve(sweep, sweep_opts));
    else if (*pii) pgg::cmd_pii(resolve(pii, pii_opts));
    else if (*thr) pgg::cmd_thresholds(resolve(thr, thr_opts));
    else if (*snap) pgg::cmd_snapshot(state_file, side, pgm_out);
  } catch (const pgg::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
