#include "monocert/random.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace monocert {

double Rng::log_uniform(double a, double b) {
  if (!(a > 0.0) || b < a) throw std::invalid_argument("log_uniform range");
  if (b == a) return a;
  return std::exp(uniform(std::log(a), std::log(b)));
}

Vec random_point(Rng& rng, const Box& box) {
  Vec v(box.dimension());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = rng.uniform(box.lower[i], box.upper[i]);
  }
  return v;
}

HistorySegment random_history(Rng& rng, const Box& box, double r) {
  const std::size_t n = box.dimension();
  if (r == 0.0) return HistorySegment::constant(random_point(rng, box), 0.0);

  switch (rng.index(3)) {
    case 0:
      return HistorySegment::constant(random_point(rng, box), r);
    case 1: {
      // Per-component sinusoid confined to the box.
      struct Wave {
        double mid, amp, omega, phase;
      };
      std::vector<Wave> waves(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double lo = box.lower[i], hi = box.upper[i];
        const double c = rng.uniform(lo, hi);
        const double amp = rng.uniform(0.0, std::min(c - lo, hi - c));
        waves[i] = {c, amp, rng.uniform(0.5, 8.0), rng.uniform(0.0, 6.283185307179586)};
      }
      return HistorySegment::from_function(n, r, [waves, n](double theta) {
        Vec v(n);
        for (std::size_t i = 0; i < n; ++i) {
          const Wave& w = waves[i];
          v[i] = w.mid + w.amp * std::sin(w.omega * theta + w.phase);
        }
        return v;
      });
    }
    default: {
      // Piecewise-linear through a few random knots.
      const std::size_t knots = 2 + rng.index(4);
      std::vector<double> times(knots);
      std::vector<Vec> values(knots);
      for (std::size_t k = 0; k < knots; ++k) {
        times[k] = -r + r * static_cast<double>(k) / (knots - 1);
        values[k] = random_point(rng, box);
      }
      auto traj = std::make_shared<DenseTrajectory>(
          DenseTrajectory::from_linear(std::move(times), std::move(values)));
      return HistorySegment::from_trajectory(std::move(traj), 0.0, r);
    }
  }
}

DelaySignal random_delay(Rng& rng, double r, double min_switch) {
  if (r == 0.0) return DelaySignal::constant(0.0, 0.0);
  switch (rng.index(3)) {
    case 0:
      return DelaySignal::constant(rng.uniform(0.0, r), r);
    case 1: {
      const double offset = rng.uniform(0.25 * r, 0.75 * r);
      const double amp =
          rng.uniform(0.0, std::min(offset, r - offset));
      return DelaySignal::sinusoidal(offset, amp, rng.uniform(0.2, 4.0),
                                     rng.uniform(0.0, 6.283185307179586), r);
    }
    default: {
      const double period = std::max(min_switch, rng.uniform(0.5 * r, 2.0 * r));
      return DelaySignal::piecewise_random(rng.bits(), period, r);
    }
  }
}

}  // namespace monocert
