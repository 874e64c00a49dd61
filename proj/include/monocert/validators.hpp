// Sampled falsifiers for the structural assumptions: quasimonotonicity of the
// delayed field and subhomogeneity of degree alpha. A pass is evidence, a
// recorded violation is a certified counterexample (the witness is kept for
// replay).

#ifndef MONOCERT_VALIDATORS_HPP
#define MONOCERT_VALIDATORS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "monocert/system.hpp"
#include "monocert/vec.hpp"

namespace monocert {

struct Violation {
  std::string property;   // which inequality failed
  std::size_t component;  // 1-based
  std::size_t trial;
  Vec x;                  // lower point / scaled argument
  Vec y;                  // upper point (monotonicity)
  double lambda = 1.0;    // subhomogeneity scale
  double lhs = 0.0;
  double rhs = 0.0;
};

struct MonotonicityReport {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<Violation> violations;
  bool passed() const { return violations.empty(); }
};

struct SubhomogeneityReport {
  double alpha = 1.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<Violation> violations;
  bool passed() const { return violations.empty(); }
};

// Samples ordered pairs with one pinned component (for f), ordered sample
// tuples (for G), and pinned-head ordered tuples for the combined field.
MonotonicityReport check_quasimonotonicity(const SystemDescriptor& sys,
                                           std::size_t trials,
                                           const Box& domain,
                                           std::uint64_t seed);

// Samples lambda log-uniformly in [1, lambda_max] with states and constant
// histories in the domain; checks f(lambda x) <= lambda^alpha f(x) and the
// same for the coupling.
SubhomogeneityReport check_subhomogeneity(const SystemDescriptor& sys,
                                          double alpha, std::size_t trials,
                                          const Box& domain,
                                          std::uint64_t seed,
                                          double lambda_max = 10.0);

}  // namespace monocert

#endif
