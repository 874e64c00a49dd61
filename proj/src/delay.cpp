#include "monocert/delay.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "monocert/random.hpp"

namespace monocert {

DelaySignal DelaySignal::constant(double value, double r) {
  if (r < 0.0) throw ConfigError("delay bound r must be nonnegative");
  if (value < 0.0 || value > r) {
    throw ConfigError("constant delay outside [0, r]");
  }
  DelaySignal d(Kind::Constant, r);
  d.value_ = value;
  return d;
}

DelaySignal DelaySignal::sinusoidal(double offset, double amplitude,
                                    double omega, double phase, double r) {
  if (r < 0.0) throw ConfigError("delay bound r must be nonnegative");
  if (amplitude < 0.0 || offset - amplitude < -1e-12 ||
      offset + amplitude > r + 1e-12) {
    throw ConfigError("sinusoidal delay range must fit inside [0, r]");
  }
  DelaySignal d(Kind::Sinusoidal, r);
  d.offset_ = offset;
  d.amplitude_ = amplitude;
  d.omega_ = omega;
  d.phase_ = phase;
  return d;
}

DelaySignal DelaySignal::piecewise_random(std::uint64_t seed,
                                          double switch_period, double r) {
  if (r < 0.0) throw ConfigError("delay bound r must be nonnegative");
  if (!(switch_period > 0.0)) {
    throw ConfigError("piecewise-random delay needs a positive switch period");
  }
  DelaySignal d(Kind::PiecewiseRandom, r);
  d.seed_ = seed;
  d.period_ = switch_period;
  return d;
}

double DelaySignal::eval(double t) const {
  switch (kind_) {
    case Kind::Constant:
      return value_;
    case Kind::Sinusoidal: {
      const double d = offset_ + amplitude_ * std::sin(omega_ * t + phase_);
      return std::clamp(d, 0.0, r_);
    }
    case Kind::PiecewiseRandom: {
      const auto cell = static_cast<std::int64_t>(std::floor(t / period_));
      const std::uint64_t h =
          splitmix64(seed_ ^ (0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(cell)));
      return hash_unit(h) * r_;
    }
  }
  return 0.0;  // unreachable
}

std::string DelaySignal::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::Constant:
      os << "constant(" << value_ << ")";
      break;
    case Kind::Sinusoidal:
      os << "sinusoidal(offset=" << offset_ << ",amplitude=" << amplitude_
         << ",omega=" << omega_ << ",phase=" << phase_ << ")";
      break;
    case Kind::PiecewiseRandom:
      os << "piecewise-constant-random(seed=" << seed_ << ",period=" << period_
         << ")";
      break;
  }
  os << "/r=" << r_;
  return os.str();
}

}  // namespace monocert
