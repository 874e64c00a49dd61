// Bounded time-varying delay signals d(t) in [0, r].

#ifndef MONOCERT_DELAY_HPP
#define MONOCERT_DELAY_HPP

#include <cstdint>
#include <string>

#include "monocert/vec.hpp"

namespace monocert {

class DelaySignal {
 public:
  enum class Kind { Constant, Sinusoidal, PiecewiseRandom };

  static DelaySignal constant(double value, double r);
  // d(t) = offset + amplitude * sin(omega t + phase); range must fit [0, r].
  static DelaySignal sinusoidal(double offset, double amplitude, double omega,
                                double phase, double r);
  // Piecewise constant, redrawn uniformly in [0, r] every switch_period,
  // addressed by a counter hash so evaluation is stateless.
  static DelaySignal piecewise_random(std::uint64_t seed, double switch_period,
                                      double r);

  Kind kind() const { return kind_; }
  double bound() const { return r_; }
  double switch_period() const { return period_; }
  double eval(double t) const;

  std::string describe() const;

 private:
  DelaySignal(Kind k, double r) : kind_(k), r_(r) {}

  Kind kind_;
  double r_;
  double value_ = 0.0;
  double offset_ = 0.0, amplitude_ = 0.0, omega_ = 0.0, phase_ = 0.0;
  std::uint64_t seed_ = 0;
  double period_ = 0.0;
};

}  // namespace monocert

#endif
