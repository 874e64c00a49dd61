// Razumikhin profile of a convergent undelayed trajectory: per-component
// running-minimum envelopes m_i(t), the level-crossing time T_i, the value
// V = exp(-min_i T_i), the gap map h_i (first strict decrease of the envelope
// at or after a given time), and the certified corner points zeta built from
// them. The envelope shortcut zeta_i = m_i(t) is exact for the interpolant
// and cross-checked against the definitional form y_i(h_i(t)).

#ifndef MONOCERT_RAZUMIKHIN_HPP
#define MONOCERT_RAZUMIKHIN_HPP

#include <memory>
#include <optional>

#include "monocert/trajectory.hpp"
#include "monocert/vec.hpp"

namespace monocert {

class RazumikhinProfile {
 public:
  enum class Kind { Forward, TwoSided };

  // Forward profile over [t_begin, t_end] of a trajectory started at the
  // region-defining initial condition.
  static RazumikhinProfile forward(std::shared_ptr<const DenseTrajectory> traj);

  // Two-sided profile from a concatenated backward+forward trajectory whose
  // domain starts at -T_b < 0.
  static RazumikhinProfile two_sided(
      std::shared_ptr<const DenseTrajectory> traj);

  Kind kind() const { return kind_; }
  const DenseTrajectory& trajectory() const { return *traj_; }
  std::size_t dimension() const { return traj_->dimension(); }
  double domain_start() const { return traj_->t_begin(); }
  double domain_end() const { return traj_->t_end(); }

  // Running-minimum envelope m_i(t).
  double envelope(std::size_t i, double t) const;

  struct TimeResult {
    double time = 0.0;
    bool resolved = true;  // false: capped at the horizon, level never undercut
  };

  // First time the envelope drops strictly below the level (the sup in the
  // level-time definition). Level must not exceed y_i(domain start).
  TimeResult crossing_time(std::size_t i, double level) const;

  // Earliest time >= u at which the envelope strictly decreases; equals u
  // where the envelope is strictly decreasing.
  TimeResult gap_time(std::size_t i, double u) const;

  // exp(-min_i T_i(x_i)); x must lie in [0, y(domain start)] componentwise.
  double value(const Vec& x) const;

 private:
  RazumikhinProfile(Kind k, std::shared_ptr<const DenseTrajectory> traj);

  Kind kind_;
  std::shared_ptr<const DenseTrajectory> traj_;
  std::vector<double> prefix_min_;  // (N+1) x n envelope at breakpoints
};

// Spec-facing wrappers.
RazumikhinProfile::TimeResult compute_T(const RazumikhinProfile& p,
                                        std::size_t i, double level);
double compute_V(const RazumikhinProfile& p, const Vec& x);
RazumikhinProfile::TimeResult compute_h(const RazumikhinProfile& p,
                                        std::size_t i, double u);

// Smallest breakpoint time with y(t) << y(t_begin) at the given margin.
std::optional<double> select_tp(const DenseTrajectory& traj, double margin);

struct ZetaResult {
  Vec zeta;
  bool capped = false;          // some gap time hit the horizon
  bool window_limited = false;  // global level exceeded the backward window
  double cross_check_error = 0.0;  // max |m_i(t) - y_i(h_i(t))| over resolved i
};

ZetaResult compute_zeta(const RazumikhinProfile& profile, double tp);

// Global corner point at level c > 0: the envelope evaluated at -log(c) on a
// two-sided profile.
ZetaResult compute_zeta_global(const RazumikhinProfile& profile, double c);

}  // namespace monocert

#endif
