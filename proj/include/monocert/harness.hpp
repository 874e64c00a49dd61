// Command implementations behind the CLI: simulate, certify, suite,
// escape-time, catalog. Each returns the process exit code and writes its
// outputs under the chosen directory.
//
// Exit codes: 0 success/verified; 1 check or sweep failure; 2 configuration
// or parse error; 3 divergence (partial output written); 4 infeasible
// certification (reason recorded in the JSON).

#ifndef MONOCERT_HARNESS_HPP
#define MONOCERT_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace monocert {

struct HarnessOptions {
  std::string system;
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::string kind = "local";
  long long trials = -1;

  double r = -1.0;
  double kappa = 2.0;
  std::vector<double> y0, v, ybar0, ylow0;
  std::vector<double> history;  // constant history for simulate

  double step = -1.0;
  double horizon = -1.0;
  double t_end = -1.0;
  double delta = -1.0;
  double margin = -1.0;

  std::vector<double> tp_override;
  std::vector<double> c_sequence;
  double expansion_factor = -1.0;
  double backward_window = -1.0;
  bool strict = false;
  bool bounding = false;

  // escape-time settings
  std::size_t escape_component = 1;  // 1-based
  double escape_threshold = 1.5;
  double escape_bound = 10.0;
  double escape_rate = 0.5;          // field decrease rate above the threshold
  double escape_slack = -1.0;        // default r
  double conv_horizon = -1.0;
  double conv_delta = -1.0;

  double suite_scale = 1.0;
};

// Fills options from a JSON config file; CLI flags override afterwards.
void load_harness_config(const std::string& path, HarnessOptions& opts);

int cmd_simulate(const HarnessOptions& opts);
int cmd_certify(const HarnessOptions& opts);
int cmd_suite(const HarnessOptions& opts);
int cmd_escape_time(const HarnessOptions& opts);
int cmd_catalog(const HarnessOptions& opts);

}  // namespace monocert

#endif
