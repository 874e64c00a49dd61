// monocert: construct and verify delay-independent regions of attraction for
// monotone time-delay systems from trajectories of the undelayed system.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "monocert/harness.hpp"
#include "monocert/vec.hpp"

namespace {

void add_common(CLI::App* cmd, monocert::HarnessOptions& opts) {
  cmd->add_option("--system", opts.system, "catalog name or system file path");
  cmd->add_option("--config", opts.config_path, "JSON run configuration");
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--seed", opts.seed, "master seed");
  cmd->add_option("--trials", opts.trials, "trial count (suite: percent of defaults)");
  cmd->add_option("--r", opts.r, "delay bound override");
  cmd->add_option("--kappa", opts.kappa, "example15 initial-condition parameter");
  cmd->add_option("--y0", opts.y0, "initial state / trajectory start");
  cmd->add_option("--step", opts.step, "integrator step");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "monocert: delay-independent region-of-attraction certification for "
      "monotone time-delay systems"};
  app.require_subcommand(1);

  monocert::HarnessOptions opts;

  // Pre-scan for --config so file values load first and flags override them.
  for (int i = 1; i + 1 <= argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) {
      opts.config_path = argv[i + 1];
    } else if (arg.rfind("--config=", 0) == 0) {
      opts.config_path = arg.substr(9);
    }
  }
  if (!opts.config_path.empty()) {
    try {
      monocert::load_harness_config(opts.config_path, opts);
    } catch (const std::exception& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    }
  }

  CLI::App* sim = app.add_subcommand(
      "simulate", "integrate the undelayed, delayed, and bounding systems");
  add_common(sim, opts);
  sim->add_option("--horizon", opts.horizon, "simulation horizon");
  sim->add_option("--history", opts.history, "constant history vector");
  sim->add_flag("--bounding", opts.bounding, "also write the bounding run");

  CLI::App* cert = app.add_subcommand(
      "certify", "construct and verify a region-of-attraction certificate");
  add_common(cert, opts);
  cert->add_option("--kind", opts.kind, "local | global | point | shifted");
  cert->add_option("--t-end", opts.t_end, "certification horizon");
  cert->add_option("--delta", opts.delta, "convergence threshold");
  cert->add_option("--margin", opts.margin, "strictness margin");
  cert->add_option("--v", opts.v, "point for point certificates");
  cert->add_option("--ybar0", opts.ybar0, "upper start (shifted)");
  cert->add_option("--ylow0", opts.ylow0, "lower start (shifted)");
  cert->add_option("--tp-override", opts.tp_override, "explicit t^p candidates");
  cert->add_option("--c-sequence", opts.c_sequence, "global level sequence");
  cert->add_option("--expansion-factor", opts.expansion_factor,
                   "required certified-box volume growth");
  cert->add_option("--backward-window", opts.backward_window,
                   "backward integration window T_b");
  cert->add_flag("--strict", opts.strict, "strict field check for point kind");

  CLI::App* suite = app.add_subcommand(
      "suite", "run the property batteries (all modules)");
  add_common(suite, opts);

  CLI::App* escape = app.add_subcommand(
      "escape-time", "crossing times into a threshold set plus convergence");
  add_common(escape, opts);
  escape->add_option("--component", opts.escape_component,
                     "state component (1-based)");
  escape->add_option("--threshold", opts.escape_threshold, "target threshold");
  escape->add_option("--bound", opts.escape_bound,
                     "history upper bound per component");
  escape->add_option("--rate", opts.escape_rate,
                     "guaranteed decrease rate above the threshold");
  escape->add_option("--slack", opts.escape_slack, "bound slack (default r)");
  escape->add_option("--conv-horizon", opts.conv_horizon,
                     "convergence confirmation horizon");
  escape->add_option("--conv-delta", opts.conv_delta,
                     "convergence tolerance");

  CLI::App* cat = app.add_subcommand("catalog", "list shipped systems");
  add_common(cat, opts);

  CLI11_PARSE(app, argc, argv);

  // Default system for commands that need one.
  if (opts.system.empty() && !cat->parsed() && !suite->parsed()) {
    opts.system = "example15";
  }

  try {
    if (sim->parsed()) return monocert::cmd_simulate(opts);
    if (cert->parsed()) return monocert::cmd_certify(opts);
    if (suite->parsed()) return monocert::cmd_suite(opts);
    if (escape->parsed()) return monocert::cmd_escape_time(opts);
    if (cat->parsed()) return monocert::cmd_catalog(opts);
  } catch (const monocert::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
