#include "monocert/system.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>

namespace monocert {

SystemDescriptor SystemDescriptor::with_delays(
    std::vector<DelaySignal> new_delays) const {
  SystemDescriptor out = *this;
  if (coupling == CouplingKind::PointDelays &&
      new_delays.size() != delays.size()) {
    throw ConfigError("with_delays: delay count must match the coupling");
  }
  for (const DelaySignal& d : new_delays) {
    if (d.bound() > r + 1e-12) {
      throw ConfigError("with_delays: delay signal bound exceeds system r");
    }
  }
  out.delays = std::move(new_delays);
  return out;
}

SystemDescriptor SystemDescriptor::make(std::string name, std::size_t n,
                                        double r, Field f, Coupling g,
                                        std::vector<DelaySignal> delays,
                                        Vec equilibrium, CouplingKind kind) {
  if (n == 0) throw ConfigError("system dimension must be >= 1");
  if (r < 0.0) throw ConfigError("delay bound r must be nonnegative");
  if (!f || !g) throw ConfigError("system needs both f and G");
  if (equilibrium.size() != n) {
    throw ConfigError("equilibrium dimension mismatch");
  }
  require_finite(equilibrium, "equilibrium");
  for (const DelaySignal& d : delays) {
    if (d.bound() > r + 1e-12) {
      throw ConfigError("delay signal bound exceeds system r");
    }
  }

  SystemDescriptor sys;
  sys.name = std::move(name);
  sys.n = n;
  sys.r = r;
  sys.f = std::move(f);
  sys.g = std::move(g);
  sys.delays = std::move(delays);
  sys.coupling = kind;
  sys.equilibrium = std::move(equilibrium);

  const Vec at_eq = eval_undelayed_field(sys, sys.equilibrium);
  for (double v : at_eq) {
    if (std::abs(v) > kOrderEps) {
      throw ConfigError("declared equilibrium is not consistent: |field| = " +
                        std::to_string(std::abs(v)));
    }
  }
  return sys;
}

void eval_undelayed_field(const SystemDescriptor& sys,
                          std::span<const double> x, std::span<double> out) {
  if (x.size() != sys.n || out.size() != sys.n) {
    throw std::invalid_argument("eval_undelayed_field: dimension mismatch");
  }
  require_finite(x, "eval_undelayed_field input");
  const std::size_t m =
      sys.coupling == CouplingKind::WindowSup ? 1 : sys.delay_count();
  std::vector<Vec> samples(m, Vec(x.begin(), x.end()));
  Vec fpart(sys.n), gpart(sys.n, 0.0);
  sys.f(x, fpart);
  sys.g(x, samples, gpart);
  for (std::size_t i = 0; i < sys.n; ++i) out[i] = fpart[i] + gpart[i];
  require_finite(out, "eval_undelayed_field result");
}

Vec eval_undelayed_field(const SystemDescriptor& sys, const Vec& x) {
  Vec out(sys.n);
  eval_undelayed_field(sys, x, out);
  return out;
}

Vec eval_delayed_field(const SystemDescriptor& sys, double t,
                       const HistorySegment& h) {
  if (h.dimension() != sys.n) {
    throw std::invalid_argument("eval_delayed_field: dimension mismatch");
  }
  if (h.window() + 1e-12 < sys.r) {
    throw ConfigError("eval_delayed_field: history window shorter than r");
  }
  const Vec head = h.eval(0.0);
  std::vector<Vec> samples;
  if (sys.coupling == CouplingKind::WindowSup) {
    samples.push_back(h.sup_over(-sys.r, 0.0));
  } else {
    samples.reserve(sys.delay_count());
    for (const DelaySignal& d : sys.delays) {
      const double dv = d.eval(t);
      if (dv < -1e-12 || dv > sys.r + 1e-12) {
        throw ConfigError("delay signal left [0, r] at t = " +
                          std::to_string(t));
      }
      samples.push_back(h.eval(-std::clamp(dv, 0.0, sys.r)));
    }
  }
  Vec fpart(sys.n), gpart(sys.n, 0.0);
  sys.f(head, fpart);
  sys.g(head, samples, gpart);
  Vec out(sys.n);
  for (std::size_t i = 0; i < sys.n; ++i) out[i] = fpart[i] + gpart[i];
  require_finite(out, "eval_delayed_field result");
  return out;
}

namespace {

// Cheap sampled spot check of quasimonotonicity for shifted systems; a
// violation means the source system was not monotone to begin with.
void assert_sampled_quasimonotone(const SystemDescriptor& sys,
                                  std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> unit(0.0, 2.0);
  const std::size_t m =
      sys.coupling == CouplingKind::WindowSup ? 1 : sys.delay_count();
  for (int trial = 0; trial < 128; ++trial) {
    Vec lo(sys.n), hi(sys.n);
    for (std::size_t i = 0; i < sys.n; ++i) {
      double a = unit(eng), b = unit(eng);
      lo[i] = std::min(a, b);
      hi[i] = std::max(a, b);
    }
    const std::size_t pin = trial % sys.n;
    hi[pin] = lo[pin];
    std::vector<Vec> zlo(m, lo), zhi(m, hi);
    Vec flo(sys.n), fhi(sys.n), glo(sys.n, 0.0), ghi(sys.n, 0.0);
    sys.f(lo, flo);
    sys.f(hi, fhi);
    sys.g(lo, zlo, glo);
    sys.g(hi, zhi, ghi);
    if (flo[pin] + glo[pin] > fhi[pin] + ghi[pin] + 1e-7) {
      throw ConfigError(
          "shift_to_origin: sampled quasimonotonicity violated; the source "
          "system is not monotone on the shifted orthant, so this transform "
          "does not apply");
    }
  }
}

}  // namespace

SystemDescriptor shift_to_origin(const SystemDescriptor& sys,
                                 ShiftDirection direction) {
  if (sys.equilibrium.size() != sys.n) {
    throw ConfigError("shift_to_origin: system lacks a declared equilibrium");
  }
  const Vec xstar = sys.equilibrium;
  const Field f0 = sys.f;
  const Coupling g0 = sys.g;
  const std::size_t n = sys.n;

  Field f_shift;
  Coupling g_shift;
  std::string suffix;
  if (direction == ShiftDirection::Above) {
    suffix = "+above";
    f_shift = [f0, xstar, n](std::span<const double> u, std::span<double> out) {
      Vec x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = xstar[i] + u[i];
      f0(x, out);
    };
    g_shift = [g0, xstar, n](std::span<const double> head,
                             std::span<const Vec> samples,
                             std::span<double> out) {
      Vec h(n);
      for (std::size_t i = 0; i < n; ++i) h[i] = xstar[i] + head[i];
      std::vector<Vec> zs(samples.size(), Vec(n));
      for (std::size_t j = 0; j < samples.size(); ++j) {
        for (std::size_t i = 0; i < n; ++i) zs[j][i] = xstar[i] + samples[j][i];
      }
      g0(h, zs, out);
    };
  } else {
    suffix = "+below";
    f_shift = [f0, xstar, n](std::span<const double> u, std::span<double> out) {
      Vec x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = xstar[i] - u[i];
      f0(x, out);
      for (std::size_t i = 0; i < n; ++i) out[i] = -out[i];
    };
    g_shift = [g0, xstar, n](std::span<const double> head,
                             std::span<const Vec> samples,
                             std::span<double> out) {
      Vec h(n);
      for (std::size_t i = 0; i < n; ++i) h[i] = xstar[i] - head[i];
      std::vector<Vec> zs(samples.size(), Vec(n));
      for (std::size_t j = 0; j < samples.size(); ++j) {
        for (std::size_t i = 0; i < n; ++i) zs[j][i] = xstar[i] - samples[j][i];
      }
      g0(h, zs, out);
      for (std::size_t i = 0; i < n; ++i) out[i] = -out[i];
    };
  }

  SystemDescriptor out = SystemDescriptor::make(
      sys.name + suffix, sys.n, sys.r, std::move(f_shift), std::move(g_shift),
      sys.delays, Vec(sys.n, 0.0), sys.coupling);
  assert_sampled_quasimonotone(out, 0x5f12u);
  return out;
}

SystemDescriptor make_bounding_system(const SystemDescriptor& sys) {
  if (sys.coupling == CouplingKind::WindowSup) return sys;
  const Coupling g0 = sys.g;
  const std::size_t m = sys.delay_count();
  Coupling g_bound = [g0, m](std::span<const double> /*head*/,
                             std::span<const Vec> samples,
                             std::span<double> out) {
    const Vec& w = samples[0];
    std::vector<Vec> zs(m, w);
    g0(w, zs, out);
  };
  SystemDescriptor out = SystemDescriptor::make(
      sys.name + "+bounding", sys.n, sys.r, sys.f, std::move(g_bound), {},
      sys.equilibrium, CouplingKind::WindowSup);
  return out;
}

}  // namespace monocert
