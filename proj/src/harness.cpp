#include "monocert/harness.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "monocert/catalog.hpp"
#include "monocert/certify.hpp"
#include "monocert/csvio.hpp"
#include "monocert/integrate.hpp"
#include "monocert/random.hpp"
#include "monocert/suite.hpp"

namespace monocert {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

void ensure_out_dir(const std::string& dir) {
  if (!dir.empty() && dir != ".") fs::create_directories(dir);
}

std::string out_path(const HarnessOptions& opts, const std::string& file) {
  return (fs::path(opts.out_dir) / file).string();
}

struct ResolvedRun {
  SystemDescriptor sys;
  const CatalogEntry* entry = nullptr;  // null for file systems
  Vec y0;
  CertifyConfig ccfg;
};

Vec default_y0(const HarnessOptions& opts, const SystemDescriptor& sys,
               const CatalogEntry* entry) {
  if (!opts.y0.empty()) {
    if (opts.y0.size() != sys.n) throw ConfigError("--y0 dimension mismatch");
    return opts.y0;
  }
  if (entry && entry->name == "example15") return example15_y0(opts.kappa);
  if (entry) return entry->default_y0;
  throw ConfigError("file-based systems need --y0");
}

ResolvedRun resolve_run(const HarnessOptions& opts) {
  if (opts.system.empty()) throw ConfigError("no system given (--system)");
  ResolvedRun run{resolve_system(opts.system, opts.r),
                  find_catalog_entry(opts.system), {}, {}};
  run.y0 = default_y0(opts, run.sys, run.entry);

  CertifyConfig& c = run.ccfg;
  c.t_end = opts.t_end > 0 ? opts.t_end
                           : (run.entry ? run.entry->default_t_end : 50.0);
  c.delta = opts.delta > 0 ? opts.delta
                           : (run.entry ? run.entry->default_delta : 1e-6);
  c.step = opts.step > 0 ? opts.step
                         : (run.sys.r > 0 ? run.sys.r / 20.0 : 0.01);
  c.margin = opts.margin >= 0 ? opts.margin : kStrictMargin;
  c.trials = opts.trials >= 0 ? static_cast<std::size_t>(opts.trials) : 50;
  c.seed = opts.seed;
  c.tp_override = opts.tp_override;
  if (!opts.c_sequence.empty()) c.c_sequence = opts.c_sequence;
  if (opts.expansion_factor > 0) c.expansion_factor = opts.expansion_factor;
  if (opts.backward_window > 0) c.backward_window = opts.backward_window;
  c.strict_field = opts.strict;
  return run;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << text;
}

}  // namespace

void load_harness_config(const std::string& path, HarnessOptions& opts) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("bad JSON in " + path + ": " + e.what());
  }
  try {
    if (j.contains("system")) {
      if (j.at("system").is_object()) {
        opts.system = path;  // inline system: load from this very file
      } else {
        opts.system = j.at("system").get<std::string>();
      }
    }
    opts.seed = j.value("seed", opts.seed);
    opts.out_dir = j.value("out", opts.out_dir);
    opts.kind = j.value("kind", opts.kind);
    if (j.contains("trials")) opts.trials = j.at("trials").get<long long>();
    opts.r = j.value("r", opts.r);
    opts.kappa = j.value("kappa", opts.kappa);
    if (j.contains("y0")) opts.y0 = j.at("y0").get<std::vector<double>>();
    if (j.contains("v")) opts.v = j.at("v").get<std::vector<double>>();
    if (j.contains("ybar0")) opts.ybar0 = j.at("ybar0").get<std::vector<double>>();
    if (j.contains("ylow0")) opts.ylow0 = j.at("ylow0").get<std::vector<double>>();
    if (j.contains("history"))
      opts.history = j.at("history").get<std::vector<double>>();
    opts.step = j.value("step", opts.step);
    opts.horizon = j.value("horizon", opts.horizon);
    opts.t_end = j.value("t_end", opts.t_end);
    opts.delta = j.value("delta", opts.delta);
    opts.margin = j.value("margin", opts.margin);
    if (j.contains("tp_override"))
      opts.tp_override = j.at("tp_override").get<std::vector<double>>();
    if (j.contains("c_sequence"))
      opts.c_sequence = j.at("c_sequence").get<std::vector<double>>();
    opts.expansion_factor = j.value("expansion_factor", opts.expansion_factor);
    opts.backward_window = j.value("backward_window", opts.backward_window);
    opts.strict = j.value("strict", opts.strict);
    opts.bounding = j.value("bounding", opts.bounding);
    opts.suite_scale = j.value("suite_scale", opts.suite_scale);
    if (j.contains("escape")) {
      const json& e = j.at("escape");
      opts.escape_component = e.value("component", opts.escape_component);
      opts.escape_threshold = e.value("threshold", opts.escape_threshold);
      opts.escape_bound = e.value("bound", opts.escape_bound);
      opts.escape_rate = e.value("rate", opts.escape_rate);
      opts.escape_slack = e.value("slack", opts.escape_slack);
      opts.conv_horizon = e.value("conv_horizon", opts.conv_horizon);
      opts.conv_delta = e.value("conv_delta", opts.conv_delta);
    }
  } catch (const json::exception& e) {
    throw ConfigError("bad config " + path + ": " + e.what());
  }
}

int cmd_simulate(const HarnessOptions& opts) {
  ResolvedRun run = resolve_run(opts);
  ensure_out_dir(opts.out_dir);
  const double horizon = opts.horizon > 0 ? opts.horizon : 60.0;
  IntegratorConfig icfg;
  icfg.step = opts.step > 0 ? opts.step : 0.01;

  Vec h0 = opts.history.empty() ? run.y0 : opts.history;
  if (h0.size() != run.sys.n) throw ConfigError("history dimension mismatch");

  int exit_code = 0;
  try {
    const DenseTrajectory und =
        integrate_ode(run.sys, run.y0, 0.0, horizon, icfg);
    write_trajectory_csv(out_path(opts, "undelayed.csv"), und);
  } catch (const DivergenceError& e) {
    if (e.partial) {
      write_trajectory_csv(out_path(opts, "undelayed.csv"), *e.partial);
    }
    std::cerr << "undelayed run diverged: " << e.what() << "\n";
    exit_code = 3;
  }

  try {
    const DenseTrajectory del = integrate_dde(
        run.sys, HistorySegment::constant(h0, run.sys.r), 0.0, horizon, icfg);
    write_trajectory_csv(out_path(opts, "delayed.csv"), del);
  } catch (const DivergenceError& e) {
    if (e.partial) {
      write_trajectory_csv(out_path(opts, "delayed.csv"), *e.partial);
    }
    std::cerr << "delayed run diverged: " << e.what() << "\n";
    exit_code = 3;
  }

  if (opts.bounding) {
    try {
      const SystemDescriptor bsys = make_bounding_system(run.sys);
      const DenseTrajectory bnd = integrate_bounding(
          bsys, HistorySegment::constant(h0, run.sys.r), 0.0, horizon, icfg);
      write_trajectory_csv(out_path(opts, "bounding.csv"), bnd);
    } catch (const DivergenceError& e) {
      if (e.partial) {
        write_trajectory_csv(out_path(opts, "bounding.csv"), *e.partial);
      }
      std::cerr << "bounding run diverged: " << e.what() << "\n";
      exit_code = 3;
    }
  }
  return exit_code;
}

int cmd_certify(const HarnessOptions& opts) {
  ResolvedRun run = resolve_run(opts);
  ensure_out_dir(opts.out_dir);

  Certificate cert;
  if (opts.kind == "local") {
    cert = certify_region(run.sys, run.y0, run.ccfg);
  } else if (opts.kind == "point") {
    const Vec v = opts.v.empty() ? run.y0 : opts.v;
    if (v.size() != run.sys.n) throw ConfigError("--v dimension mismatch");
    cert = certify_point(run.sys, v, run.ccfg);
  } else if (opts.kind == "global") {
    cert = certify_global(run.sys, run.y0, run.ccfg);
  } else if (opts.kind == "shifted") {
    Vec ybar = opts.ybar0, ylow = opts.ylow0;
    if (ybar.empty()) ybar = run.y0;
    if (ylow.empty()) {
      // Mirror the above-side offset through the equilibrium.
      ylow.resize(run.sys.n);
      for (std::size_t i = 0; i < run.sys.n; ++i) {
        ylow[i] = 2.0 * run.sys.equilibrium[i] - ybar[i];
      }
    }
    cert = certify_shifted(run.sys, ybar, ylow, run.ccfg);
  } else {
    throw ConfigError("unknown certificate kind: " + opts.kind);
  }

  write_text(out_path(opts, "certificate.json"), certificate_to_json(cert));
  if (cert.infeasible()) {
    std::cerr << "infeasible: " << cert.infeasible_reason << "\n";
    return 4;
  }
  std::cout << (cert.verified ? "verified" : "NOT verified") << " ("
            << to_string(cert.kind) << " certificate, "
            << cert.checks.size() << " checks, sweep "
            << cert.sweep.trials - cert.sweep.failures << "/"
            << cert.sweep.trials << ")\n";
  return cert.verified ? 0 : 1;
}

int cmd_suite(const HarnessOptions& opts) {
  ensure_out_dir(opts.out_dir);
  SuiteConfig scfg;
  scfg.seed = opts.seed;
  scfg.system_filter = opts.system;
  if (opts.trials >= 0) {
    // --trials is a percentage of the per-property defaults; 0 is vacuous.
    scfg.trials_scale = static_cast<double>(opts.trials) / 100.0;
  } else {
    scfg.trials_scale = opts.suite_scale;
  }
  const SuiteReport report = run_suite(scfg);
  write_text(out_path(opts, "suite_report.json"),
             suite_report_to_json(report));
  for (const PropertyResult& p : report.properties) {
    std::cout << (p.passed ? "[PASS] " : "[FAIL] ") << p.name << " (trials "
              << p.trials << (p.no_evidence ? ", no evidence" : "") << ")";
    if (!p.passed) std::cout << " -- " << p.witness;
    std::cout << "\n";
  }
  if (report.vacuous()) std::cout << "suite vacuous: no evidence collected\n";
  return report.all_passed() ? 0 : 1;
}

int cmd_escape_time(const HarnessOptions& opts) {
  ResolvedRun run = resolve_run(opts);
  ensure_out_dir(opts.out_dir);
  const SystemDescriptor& sys = run.sys;
  if (opts.escape_component < 1 || opts.escape_component > sys.n) {
    throw ConfigError("escape component out of range");
  }
  const std::size_t comp = opts.escape_component - 1;
  const double thr = opts.escape_threshold;
  const double slack = opts.escape_slack >= 0 ? opts.escape_slack : sys.r;
  const double conv_T = opts.conv_horizon > 0 ? opts.conv_horizon : 3000.0;
  const double conv_tol = opts.conv_delta > 0 ? opts.conv_delta : 1e-3;
  const std::size_t trials =
      opts.trials >= 0 ? static_cast<std::size_t>(opts.trials) : 100;

  IntegratorConfig icfg;
  icfg.step = opts.step > 0 ? opts.step : 0.01;
  Box box(Vec(sys.n, 0.0), Vec(sys.n, opts.escape_bound));

  std::size_t crossed = 0, bound_ok = 0, converged = 0;
  double max_crossing = 0.0;
  std::vector<std::string> witnesses;

  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng(split_seed(opts.seed, 40, trial));
    std::vector<DelaySignal> delays;
    const double min_switch =
        2.0 * (sys.r > 0 ? std::min(icfg.step, sys.r / 20.0) : icfg.step);
    for (std::size_t j = 0; j < sys.delay_count(); ++j) {
      delays.push_back(random_delay(rng, sys.r, min_switch));
    }
    const SystemDescriptor sys_t = sys.with_delays(delays);
    const HistorySegment hist = random_history(rng, box, sys.r);
    const double x0c = hist.eval(0.0)[comp];

    DenseTrajectory traj;
    try {
      traj = integrate_dde(sys_t, hist, 0.0, conv_T, icfg);
    } catch (const std::exception& e) {
      if (witnesses.size() < 5) {
        witnesses.push_back("trial " + std::to_string(trial) +
                            ": integration failed: " + e.what());
      }
      continue;
    }

    double tau = 0.0;
    bool has_crossing = true;
    if (x0c > thr) {
      const auto cross = first_crossing(
          traj, EventSpec{comp, thr, EventSpec::Direction::Downward});
      if (!cross) {
        has_crossing = false;
        if (witnesses.size() < 5) {
          witnesses.push_back("trial " + std::to_string(trial) +
                              ": no crossing into the target set");
        }
      } else {
        tau = *cross;
      }
    }
    if (!has_crossing) continue;
    ++crossed;
    max_crossing = std::max(max_crossing, tau);

    const double analytic =
        std::max(0.0, (x0c - thr) / opts.escape_rate) + slack;
    if (tau <= analytic) {
      ++bound_ok;
    } else if (witnesses.size() < 5) {
      witnesses.push_back("trial " + std::to_string(trial) + ": crossing " +
                          std::to_string(tau) + " exceeded bound " +
                          std::to_string(analytic));
    }

    const Vec xT = traj.eval(conv_T);
    double norm = 0.0;
    for (std::size_t i = 0; i < sys.n; ++i) {
      norm = std::max(norm, std::abs(xT[i] - sys.equilibrium[i]));
    }
    if (norm < conv_tol) {
      ++converged;
    } else if (witnesses.size() < 5) {
      witnesses.push_back("trial " + std::to_string(trial) +
                          ": terminal norm " + std::to_string(norm));
    }
  }

  const bool ok = crossed == trials && bound_ok == trials &&
                  converged == trials;
  ordered_json j;
  j["system"] = sys.name;
  j["trials"] = trials;
  j["component"] = opts.escape_component;
  j["threshold"] = thr;
  j["finite_crossings"] = crossed;
  j["within_analytic_bound"] = bound_ok;
  j["converged"] = converged;
  j["max_crossing_time"] = max_crossing;
  j["conv_horizon"] = conv_T;
  j["conv_delta"] = conv_tol;
  j["seed"] = opts.seed;
  j["passed"] = ok;
  if (!witnesses.empty()) j["witnesses"] = witnesses;
  write_text(out_path(opts, "escape_report.json"), j.dump(2) + "\n");

  std::cout << "escape-time: " << crossed << "/" << trials
            << " finite crossings, " << bound_ok << "/" << trials
            << " within bound, " << converged << "/" << trials
            << " converged (max crossing " << max_crossing << ")\n";
  return ok ? 0 : 1;
}

int cmd_catalog(const HarnessOptions&) {
  for (const CatalogEntry& e : catalog()) {
    std::cout << e.name << " (n=" << e.build(e.default_r).n
              << ", r=" << e.default_r << (e.fixture ? ", fixture" : "")
              << "): " << e.summary << "\n";
  }
  return 0;
}

}  // namespace monocert
