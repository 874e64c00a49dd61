// Property batteries: the sampled invariants of every module, runnable as one
// suite. Each property reports pass/fail with counts and a replayable first
// witness (master seed + trial index).

#ifndef MONOCERT_SUITE_HPP
#define MONOCERT_SUITE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace monocert {

struct PropertyResult {
  std::string name;
  bool passed = true;
  std::size_t trials = 0;
  std::string witness;       // first counterexample, empty when passed
  bool no_evidence = false;  // vacuous pass (zero trials)
  double seconds = 0.0;
};

struct SuiteConfig {
  std::uint64_t seed = 0;
  // Scales every property's default trial count; 0 runs the suite vacuously.
  double trials_scale = 1.0;
  // When set, catalog-wide properties run only on this system (fixtures
  // included, with no inverted expectations).
  std::string system_filter;
};

struct SuiteReport {
  std::vector<PropertyResult> properties;
  std::uint64_t seed = 0;
  double total_seconds = 0.0;
  bool all_passed() const;
  bool vacuous() const;
};

SuiteReport run_suite(const SuiteConfig& cfg);

std::string suite_report_to_json(const SuiteReport& report, int indent = 2);

}  // namespace monocert

#endif
