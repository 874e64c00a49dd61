// Fixed-step explicit RK4 with cubic dense output, for the undelayed system
// (forward and backward), the delayed system under time-varying delays, and
// the window-supremum bounding system. Delay lookups are served by the
// growing dense output; the window supremum uses a monotone-wedge queue over
// segment extrema.

#ifndef MONOCERT_INTEGRATE_HPP
#define MONOCERT_INTEGRATE_HPP

#include <memory>
#include <optional>

#include "monocert/history.hpp"
#include "monocert/system.hpp"
#include "monocert/trajectory.hpp"

namespace monocert {

struct IntegratorConfig {
  double step = 0.01;
  double overflow_guard = 1e12;  // inf-norm abort threshold
  std::size_t max_steps = 100'000'000;
};

struct EventSpec {
  std::size_t component = 0;  // 0-based
  double threshold = 0.0;
  enum class Direction { Downward, Upward } direction = Direction::Downward;
};

// Blow-up during forward integration. Carries the last time the state was
// still inside the overflow guard and the trajectory computed up to there
// (null when the very first step failed).
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& msg, double last_valid,
                  std::shared_ptr<const DenseTrajectory> partial)
      : std::runtime_error(msg),
        last_valid_time(last_valid),
        partial(std::move(partial)) {}

  double last_valid_time;
  std::shared_ptr<const DenseTrajectory> partial;
};

// Undelayed system dx/dt = f(x) + G(x, ..., x) over [t0, t1].
DenseTrajectory integrate_ode(const SystemDescriptor& sys, const Vec& x0,
                              double t0, double t1,
                              const IntegratorConfig& cfg);

struct BackwardResult {
  DenseTrajectory traj;       // on [-T_actual, 0]
  bool reached_window = true; // false when the overflow guard stopped it early
};

// Time-reversed undelayed integration from x0 back to -T_back. Early blow-up
// is expected there (it is the hypothesis being probed) and returns the
// partial trajectory flagged rather than throwing.
BackwardResult integrate_ode_backward(const SystemDescriptor& sys,
                                      const Vec& x0, double T_back,
                                      const IntegratorConfig& cfg);

// Delayed system from an initial history covering [t0 - r, t0]. The step is
// clamped to r/20 when delays are present so lookups fall in already-computed
// segments; lookups inside the step being formed extrapolate the previous
// segment (first-order-accurate vanishing-delay corner case).
DenseTrajectory integrate_dde(const SystemDescriptor& sys,
                              const HistorySegment& history, double t0,
                              double t1, const IntegratorConfig& cfg);

// Bounding system produced by make_bounding_system; sliding window suprema
// over [t - r, t] come from a monotone-wedge queue over segment extrema.
DenseTrajectory integrate_bounding(const SystemDescriptor& sys_bounding,
                                   const HistorySegment& history, double t0,
                                   double t1, const IntegratorConfig& cfg);

// Earliest time the component reaches the threshold from the other side,
// located by bisection on the interpolant (1e-10 time tolerance). Returns
// nullopt when the trajectory never crosses, including when it already
// starts past the threshold in the stated direction.
std::optional<double> first_crossing(const DenseTrajectory& traj,
                                     const EventSpec& ev);

}  // namespace monocert

#endif
