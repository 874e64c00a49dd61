#include "monocert/validators.hpp"

#include <algorithm>
#include <cmath>

#include "monocert/random.hpp"

namespace monocert {

namespace {

// Slack for flagging: strictly larger than order eps so roundoff in honest
// systems never reports a counterexample.
constexpr double kViolationSlack = 1e-9;

void ordered_pair(Rng& rng, const Box& box, Vec& lo, Vec& hi) {
  const std::size_t n = box.dimension();
  lo.resize(n);
  hi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double a = rng.uniform(box.lower[i], box.upper[i]);
    double b = rng.uniform(box.lower[i], box.upper[i]);
    lo[i] = std::min(a, b);
    hi[i] = std::max(a, b);
  }
}

}  // namespace

MonotonicityReport check_quasimonotonicity(const SystemDescriptor& sys,
                                           std::size_t trials,
                                           const Box& domain,
                                           std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("check_quasimonotonicity: trials >= 1");
  if (domain.dimension() != sys.n) {
    throw std::invalid_argument("check_quasimonotonicity: domain dimension");
  }
  MonotonicityReport report;
  report.trials = trials;
  report.seed = seed;

  const std::size_t m =
      sys.coupling == CouplingKind::WindowSup ? 1 : sys.delay_count();
  Vec flo(sys.n), fhi(sys.n), glo(sys.n), ghi(sys.n);

  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng(split_seed(seed, 11, trial));
    Vec lo, hi;

    // Condition on f: x <= y, x_i = y_i => f_i(x) <= f_i(y).
    ordered_pair(rng, domain, lo, hi);
    std::size_t pin = rng.index(sys.n);
    hi[pin] = lo[pin];
    sys.f(lo, flo);
    sys.f(hi, fhi);
    if (flo[pin] > fhi[pin] + kViolationSlack) {
      report.violations.push_back({"f-quasimonotone", pin + 1, trial, lo, hi,
                                   1.0, flo[pin], fhi[pin]});
    }

    // Condition on G: ordered histories give ordered couplings, every
    // component (no pinning).
    Vec hlo, hhi;
    ordered_pair(rng, domain, hlo, hhi);
    std::vector<Vec> zlo(m), zhi(m);
    for (std::size_t j = 0; j < m; ++j) {
      ordered_pair(rng, domain, zlo[j], zhi[j]);
    }
    std::fill(glo.begin(), glo.end(), 0.0);
    std::fill(ghi.begin(), ghi.end(), 0.0);
    sys.g(hlo, zlo, glo);
    sys.g(hhi, zhi, ghi);
    for (std::size_t i = 0; i < sys.n; ++i) {
      if (glo[i] > ghi[i] + kViolationSlack) {
        report.violations.push_back({"g-monotone", i + 1, trial, hlo, hhi, 1.0,
                                     glo[i], ghi[i]});
        break;
      }
    }

    // Combined field quasimonotonicity: ordered histories with pinned head
    // component i give ordered i-th field values.
    Vec plo, phi;
    ordered_pair(rng, domain, plo, phi);
    pin = rng.index(sys.n);
    phi[pin] = plo[pin];
    std::vector<Vec> wlo(m), whi(m);
    for (std::size_t j = 0; j < m; ++j) {
      ordered_pair(rng, domain, wlo[j], whi[j]);
    }
    sys.f(plo, flo);
    sys.f(phi, fhi);
    std::fill(glo.begin(), glo.end(), 0.0);
    std::fill(ghi.begin(), ghi.end(), 0.0);
    sys.g(plo, wlo, glo);
    sys.g(phi, whi, ghi);
    if (flo[pin] + glo[pin] > fhi[pin] + ghi[pin] + kViolationSlack) {
      report.violations.push_back({"field-quasimonotone", pin + 1, trial, plo,
                                   phi, 1.0, flo[pin] + glo[pin],
                                   fhi[pin] + ghi[pin]});
    }
  }
  return report;
}

SubhomogeneityReport check_subhomogeneity(const SystemDescriptor& sys,
                                          double alpha, std::size_t trials,
                                          const Box& domain,
                                          std::uint64_t seed,
                                          double lambda_max) {
  if (!(alpha > 0.0)) throw std::invalid_argument("check_subhomogeneity: alpha > 0");
  if (domain.dimension() != sys.n) {
    throw std::invalid_argument("check_subhomogeneity: domain dimension");
  }
  SubhomogeneityReport report;
  report.alpha = alpha;
  report.trials = trials;
  report.seed = seed;

  const std::size_t m =
      sys.coupling == CouplingKind::WindowSup ? 1 : sys.delay_count();
  Vec fx(sys.n), fsx(sys.n), gx(sys.n), gsx(sys.n);

  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng(split_seed(seed, 13, trial));
    const double lambda = rng.log_uniform(1.0, lambda_max);
    const double scale = std::pow(lambda, alpha);

    Vec x(sys.n);
    for (std::size_t i = 0; i < sys.n; ++i) {
      x[i] = rng.uniform(std::max(0.0, domain.lower[i]), domain.upper[i]);
    }
    Vec sx(sys.n);
    for (std::size_t i = 0; i < sys.n; ++i) sx[i] = lambda * x[i];

    sys.f(x, fx);
    sys.f(sx, fsx);
    for (std::size_t i = 0; i < sys.n; ++i) {
      if (fsx[i] > scale * fx[i] + kViolationSlack * std::max(1.0, scale)) {
        report.violations.push_back({"f-subhomogeneous", i + 1, trial, x, sx,
                                     lambda, fsx[i], scale * fx[i]});
        break;
      }
    }

    // Constant history v: all delayed samples equal v.
    Vec v(sys.n);
    for (std::size_t i = 0; i < sys.n; ++i) {
      v[i] = rng.uniform(std::max(0.0, domain.lower[i]), domain.upper[i]);
    }
    Vec sv(sys.n);
    for (std::size_t i = 0; i < sys.n; ++i) sv[i] = lambda * v[i];
    std::vector<Vec> zs(m, v), szs(m, sv);
    std::fill(gx.begin(), gx.end(), 0.0);
    std::fill(gsx.begin(), gsx.end(), 0.0);
    sys.g(v, zs, gx);
    sys.g(sv, szs, gsx);
    for (std::size_t i = 0; i < sys.n; ++i) {
      if (gsx[i] > scale * gx[i] + kViolationSlack * std::max(1.0, scale)) {
        report.violations.push_back({"g-subhomogeneous", i + 1, trial, v, sv,
                                     lambda, gsx[i], scale * gx[i]});
        break;
      }
    }
  }
  return report;
}

}  // namespace monocert
