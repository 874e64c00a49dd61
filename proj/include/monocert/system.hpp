// System descriptors for monotone delayed dynamics
//
//   dx/dt = f(x(t)) + G(x(t), x(t - d_1(t)), ..., x(t - d_m(t)))
//
// and the associated undelayed and window-supremum bounding systems. The
// delayed functional is restricted to finitely many discrete time-varying
// delayed point evaluations, which makes constant-argument time invariance
// structural.

#ifndef MONOCERT_SYSTEM_HPP
#define MONOCERT_SYSTEM_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "monocert/delay.hpp"
#include "monocert/history.hpp"
#include "monocert/vec.hpp"

namespace monocert {

// Instantaneous field f(x) -> out, written into out (no allocation).
using Field = std::function<void(std::span<const double>, std::span<double>)>;

// Delayed coupling G(head, samples) -> out. samples has one entry per delay
// signal (PointDelays) or a single window-supremum vector (WindowSup).
using Coupling = std::function<void(std::span<const double>,
                                    std::span<const Vec>, std::span<double>)>;

enum class CouplingKind { PointDelays, WindowSup };

struct SystemDescriptor {
  std::string name;
  std::size_t n = 0;
  double r = 0.0;  // delay bound
  Field f;
  Coupling g;
  std::vector<DelaySignal> delays;
  CouplingKind coupling = CouplingKind::PointDelays;
  Vec equilibrium;

  std::size_t delay_count() const { return delays.size(); }

  SystemDescriptor with_delays(std::vector<DelaySignal> new_delays) const;

  // Validates dimensions, delay bounds, and equilibrium consistency
  // f(x*) + G(x*, x*, ...) = 0 within the order tolerance.
  static SystemDescriptor make(std::string name, std::size_t n, double r,
                               Field f, Coupling g,
                               std::vector<DelaySignal> delays,
                               Vec equilibrium,
                               CouplingKind kind = CouplingKind::PointDelays);
};

// f(x) + G(x, x, ..., x).
Vec eval_undelayed_field(const SystemDescriptor& sys, const Vec& x);
void eval_undelayed_field(const SystemDescriptor& sys,
                          std::span<const double> x, std::span<double> out);

// f(h(0)) + G(h(0), h(-d_1(t)), ..., h(-d_m(t))) for PointDelays, or the
// window-supremum coupling for WindowSup descriptors.
Vec eval_delayed_field(const SystemDescriptor& sys, double t,
                       const HistorySegment& h);

enum class ShiftDirection { Above, Below };

// Coordinate change moving a declared equilibrium to the origin. Above maps
// u = x - x*; Below mirrors, u = x* - x, negating the fields. Both preserve
// the monotonicity conditions (spot-checked by sampling at construction).
SystemDescriptor shift_to_origin(const SystemDescriptor& sys,
                                 ShiftDirection direction);

// Autonomous comparison system whose coupling evaluates G at the
// componentwise supremum of the history over [-r, 0].
SystemDescriptor make_bounding_system(const SystemDescriptor& sys);

}  // namespace monocert

#endif
