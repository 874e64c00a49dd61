// Certificate pipelines: local region from a convergent trajectory, point
// regions from a negative vector field, finite-window global certificates
// from backward-divergent trajectories, and two-sided certificates around a
// nonzero equilibrium. Every certificate records its checks, the Monte-Carlo
// sweep summary, and provenance; it is verified only if every enabled check
// passed.

#ifndef MONOCERT_CERTIFY_HPP
#define MONOCERT_CERTIFY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "monocert/integrate.hpp"
#include "monocert/razumikhin.hpp"
#include "monocert/system.hpp"

namespace monocert {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // witness description when failed, context otherwise
  std::optional<std::size_t> component;  // 1-based
  std::optional<double> value;
};

CheckResult verify_field_sign(const SystemDescriptor& sys, const Vec& v,
                              bool strict, double margin = kStrictMargin);

struct SweepSummary {
  std::size_t trials = 0;
  double horizon = 0.0;
  double max_terminal_norm = 0.0;
  std::uint64_t seed = 0;
  std::size_t failures = 0;
  std::string first_failure;
  bool passed() const { return failures == 0; }
};

enum class CertificateKind { Local, Global, Point, Shifted };

const char* to_string(CertificateKind k);

struct Certificate {
  CertificateKind kind = CertificateKind::Local;
  std::string system_name;
  std::string system_digest;
  std::string config_digest;
  std::uint64_t seed = 0;

  Vec zeta;        // local / point corner (shifted coordinates when auto-shifted)
  double tp = 0.0; // local; above-side value for shifted
  bool has_tp = false;
  std::vector<std::pair<double, Vec>> zeta_c;  // global levels
  Vec zeta_lower, zeta_upper;                  // shifted
  double tp_below = 0.0;                       // shifted below-side

  std::vector<CheckResult> checks;
  SweepSummary sweep;
  bool verified = false;
  std::string infeasible_reason;  // nonempty: pipeline could not be run

  bool infeasible() const { return !infeasible_reason.empty(); }
};

std::string certificate_to_json(const Certificate& cert, int indent = 2);

struct CertifyConfig {
  double margin = kStrictMargin;  // t^p selection and strict field margin
  double delta = 1e-6;            // convergence threshold at the horizon
  double t_end = 50.0;            // horizon
  double step = 0.01;             // base integrator step
  std::size_t trials = 50;        // Monte-Carlo sweep trials
  std::uint64_t seed = 0;
  std::vector<double> tp_override;         // first valid entry wins
  std::vector<double> c_sequence = {1.0, 5.0, 25.0};
  double expansion_factor = 10.0;          // certified-box volume growth
  double backward_window = -1.0;           // T_b; auto from c_max when < 0
  double backward_growth_min = 2.0;        // per-component divergence factor
  bool strict_field = false;               // point certificates
  std::size_t level_samples = 1000;        // level-set sampling
  std::size_t invariance_samples = 10;     // short delayed sims inside S
  bool domination_check = true;            // compare sweeps to bounding run
};

// Level-set checks around the corner point: sampled containment in [0, zeta],
// membership of zeta itself, and short delayed runs staying inside.
std::vector<CheckResult> verify_level_set(const SystemDescriptor& sys,
                                          const RazumikhinProfile& profile,
                                          double tp, const Vec& zeta,
                                          const CertifyConfig& cfg);

Certificate certify_region(const SystemDescriptor& sys, const Vec& y0,
                           const CertifyConfig& cfg);

Certificate certify_point(const SystemDescriptor& sys, const Vec& v,
                          const CertifyConfig& cfg);

Certificate certify_global(const SystemDescriptor& sys, const Vec& y0,
                           const CertifyConfig& cfg);

Certificate certify_shifted(const SystemDescriptor& sys, const Vec& ybar0,
                            const Vec& ylow0, const CertifyConfig& cfg);

// lower(t) <= upper(t) + tol at every breakpoint of lower; writes a witness
// description on failure.
bool trajectory_dominated(const DenseTrajectory& lower,
                          const DenseTrajectory& upper, double tol,
                          std::string* witness = nullptr);

std::string system_digest(const SystemDescriptor& sys);

}  // namespace monocert

#endif
