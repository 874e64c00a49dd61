// Deterministic seeding and random inputs for sweeps.
//
// All randomness derives from one master seed through a counter-based split,
// so parallel trials reproduce regardless of scheduling.

#ifndef MONOCERT_RANDOM_HPP
#define MONOCERT_RANDOM_HPP

#include <cstdint>
#include <random>

#include "monocert/delay.hpp"
#include "monocert/history.hpp"
#include "monocert/vec.hpp"

namespace monocert {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Child seed for (stream, index) under a master seed.
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream,
                                std::uint64_t index) {
  return splitmix64(splitmix64(master ^ (0xA076'1D64'78BD'642FULL * (stream + 1))) ^
                    index);
}

// Uniform double in [0, 1) from a hash word.
inline double hash_unit(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(eng_);
  }
  double log_uniform(double a, double b);
  std::uint64_t bits() { return eng_(); }
  std::size_t index(std::size_t count) {
    return std::uniform_int_distribution<std::size_t>(0, count - 1)(eng_);
  }

 private:
  std::mt19937_64 eng_;
};

// A point drawn uniformly from the box.
Vec random_point(Rng& rng, const Box& box);

// Continuous random history with values in the box: a mix of constants,
// per-component sinusoids, and piecewise-linear interpolants.
HistorySegment random_history(Rng& rng, const Box& box, double r);

// Random admissible delay signal: constant, sinusoidal, or piecewise-constant
// with switch period at least min_switch.
DelaySignal random_delay(Rng& rng, double r, double min_switch);

}  // namespace monocert

#endif
