#include "monocert/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace monocert {

namespace {

// Growing dense output shared by the integration drivers. The derivative row
// of the newest node is provisional (k4) until the next stage-1 evaluation
// replaces it with the true field value.
struct DenseStore {
  std::size_t n = 0;
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> derivs;
  std::size_t final_nodes = 0;  // nodes 0..final_nodes-1 have final derivs

  double t_begin() const { return times.front(); }
  double t_end() const { return times.back(); }
  std::size_t nodes() const { return times.size(); }

  std::size_t locate(double t) const {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t k = static_cast<std::size_t>(it - times.begin());
    if (k == 0) return 0;
    if (k >= times.size()) return times.size() - 2;
    return k - 1;
  }

  hermite::Cubic cubic(std::size_t i, std::size_t k) const {
    const double h = times[k + 1] - times[k];
    return hermite::make(h, values[k * n + i], derivs[k * n + i],
                         values[(k + 1) * n + i], derivs[(k + 1) * n + i]);
  }

  double eval_comp(std::size_t i, double t) const {
    const std::size_t k = locate(t);
    const double u = (t - times[k]) / (times[k + 1] - times[k]);
    return cubic(i, k).eval(u);
  }

  // Allows t beyond t_end using the last segment (or a linear model from the
  // single known node on the very first step).
  double eval_comp_extrapolated(std::size_t i, double t) const {
    if (nodes() >= 2) {
      const std::size_t k = times.size() - 2;
      const double u = (t - times[k]) / (times[k + 1] - times[k]);
      return cubic(i, k).eval(u);
    }
    return values[i] + (t - times[0]) * derivs[i];
  }

  void push_node(double t, std::span<const double> x,
                 std::span<const double> d) {
    times.push_back(t);
    values.insert(values.end(), x.begin(), x.end());
    derivs.insert(derivs.end(), d.begin(), d.end());
  }

  void overwrite_last_deriv(std::span<const double> d) {
    std::copy(d.begin(), d.end(), derivs.end() - static_cast<std::ptrdiff_t>(n));
  }

  DenseTrajectory finalize(std::size_t node_count) const {
    std::vector<double> ts(times.begin(),
                           times.begin() + static_cast<std::ptrdiff_t>(node_count));
    std::vector<Vec> vs, ds;
    vs.reserve(node_count);
    ds.reserve(node_count);
    for (std::size_t k = 0; k < node_count; ++k) {
      vs.emplace_back(values.begin() + static_cast<std::ptrdiff_t>(k * n),
                      values.begin() + static_cast<std::ptrdiff_t>((k + 1) * n));
      ds.emplace_back(derivs.begin() + static_cast<std::ptrdiff_t>(k * n),
                      derivs.begin() + static_cast<std::ptrdiff_t>((k + 1) * n));
    }
    return DenseTrajectory::from_nodes(std::move(ts), std::move(vs),
                                       std::move(ds));
  }
};

bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

double span_inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct StepGrid {
  std::size_t steps;
  double h;
};

StepGrid make_grid(double t0, double t1, double h_req,
                   const IntegratorConfig& cfg) {
  if (!(t1 > t0)) throw std::invalid_argument("integration span must be positive");
  if (!(h_req > 0.0) || !std::isfinite(h_req)) {
    throw ConfigError("integrator step must be positive");
  }
  const double span = t1 - t0;
  const auto steps = static_cast<std::size_t>(std::ceil(span / h_req - 1e-9));
  const std::size_t nsteps = std::max<std::size_t>(1, steps);
  if (nsteps > cfg.max_steps) {
    throw ConfigError("integration would exceed max_steps (" +
                      std::to_string(nsteps) + " needed)");
  }
  return {nsteps, span / static_cast<double>(nsteps)};
}

// Classical RK4 over the grid. rhs(t, x, out) may consult the store (delay
// lookups). Returns the number of completed nodes; when stop_early is
// non-null a blow-up stops the run quietly and sets *stop_early, otherwise it
// throws DivergenceError.
template <typename Rhs>
std::size_t rk4_drive(DenseStore& store, double t0, const StepGrid& grid,
                      const IntegratorConfig& cfg, Rhs&& rhs,
                      bool* stop_early) {
  const std::size_t n = store.n;
  Vec xs(n), k1(n), k2(n), k3(n), k4(n), xnew(n);

  std::copy(store.values.begin(), store.values.begin() + static_cast<std::ptrdiff_t>(n),
            xnew.begin());
  rhs(t0, std::span<const double>(xnew), std::span<double>(k1));
  if (!all_finite(k1)) {
    if (stop_early) {
      *stop_early = true;
      return 1;
    }
    throw DivergenceError("field not finite at initial state", t0, nullptr);
  }
  std::copy(k1.begin(), k1.end(), store.derivs.begin());
  store.final_nodes = 1;

  const double h = grid.h;
  for (std::size_t step = 0; step < grid.steps; ++step) {
    const double t = t0 + static_cast<double>(step) * h;
    const double* x = store.values.data() + step * n;

    for (std::size_t i = 0; i < n; ++i) xs[i] = x[i] + 0.5 * h * k1[i];
    rhs(t + 0.5 * h, xs, k2);
    for (std::size_t i = 0; i < n; ++i) xs[i] = x[i] + 0.5 * h * k2[i];
    rhs(t + 0.5 * h, xs, k3);
    for (std::size_t i = 0; i < n; ++i) xs[i] = x[i] + h * k3[i];
    rhs(t + h, xs, k4);
    for (std::size_t i = 0; i < n; ++i) {
      xnew[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

    const bool bad = !all_finite(xnew) || span_inf_norm(xnew) > cfg.overflow_guard;
    if (bad) {
      if (stop_early) {
        *stop_early = true;
        return step + 1;
      }
      std::shared_ptr<const DenseTrajectory> partial;
      if (step >= 1) {
        partial = std::make_shared<DenseTrajectory>(store.finalize(step + 1));
      }
      throw DivergenceError("trajectory blow-up past t = " + std::to_string(t),
                            t, std::move(partial));
    }

    store.push_node(t + h, xnew, k4);  // provisional slope
    rhs(t + h, xnew, k1);
    if (!all_finite(k1)) {
      if (stop_early) {
        *stop_early = true;
        return step + 2;
      }
      std::shared_ptr<const DenseTrajectory> partial =
          std::make_shared<DenseTrajectory>(store.finalize(step + 2));
      throw DivergenceError("field not finite past t = " + std::to_string(t),
                            t + h, std::move(partial));
    }
    store.overwrite_last_deriv(k1);
    store.final_nodes = step + 2;
  }
  return grid.steps + 1;
}

struct UndelayedRhs {
  const SystemDescriptor& sys;
  bool reversed;
  std::vector<Vec> samples;
  Vec fbuf, gbuf;

  UndelayedRhs(const SystemDescriptor& s, bool rev)
      : sys(s),
        reversed(rev),
        samples(s.coupling == CouplingKind::WindowSup ? 1 : s.delay_count(),
                Vec(s.n)),
        fbuf(s.n),
        gbuf(s.n) {}

  void operator()(double /*t*/, std::span<const double> x,
                  std::span<double> out) {
    for (Vec& s : samples) std::copy(x.begin(), x.end(), s.begin());
    sys.f(x, fbuf);
    std::fill(gbuf.begin(), gbuf.end(), 0.0);
    sys.g(x, samples, gbuf);
    const double sign = reversed ? -1.0 : 1.0;
    for (std::size_t i = 0; i < sys.n; ++i) out[i] = sign * (fbuf[i] + gbuf[i]);
  }
};

void check_start_state(const SystemDescriptor& sys, const Vec& x0) {
  if (x0.size() != sys.n) {
    throw std::invalid_argument("initial state dimension mismatch");
  }
  require_finite(x0, "initial state");
}

struct DdeRhs {
  const SystemDescriptor& sys;
  const HistorySegment& hist;
  const DenseStore& store;
  double t0;
  std::vector<Vec> samples;
  Vec fbuf, gbuf;

  DdeRhs(const SystemDescriptor& s, const HistorySegment& h,
         const DenseStore& st, double start)
      : sys(s),
        hist(h),
        store(st),
        t0(start),
        samples(s.delay_count(), Vec(s.n)),
        fbuf(s.n),
        gbuf(s.n) {}

  void lookup(double tau, Vec& out) {
    if (tau <= t0) {
      hist.eval(std::max(tau - t0, -hist.window()), out);
      return;
    }
    if (tau <= store.t_end()) {
      for (std::size_t i = 0; i < sys.n; ++i) out[i] = store.eval_comp(i, tau);
      return;
    }
    for (std::size_t i = 0; i < sys.n; ++i) {
      out[i] = store.eval_comp_extrapolated(i, tau);
    }
  }

  void operator()(double t, std::span<const double> x, std::span<double> out) {
    for (std::size_t j = 0; j < samples.size(); ++j) {
      const double d = sys.delays[j].eval(t);
      if (d < -1e-12 || d > sys.r + 1e-12) {
        throw ConfigError("delay signal left [0, r] at t = " +
                          std::to_string(t));
      }
      lookup(t - std::clamp(d, 0.0, sys.r), samples[j]);
    }
    sys.f(x, fbuf);
    std::fill(gbuf.begin(), gbuf.end(), 0.0);
    sys.g(x, samples, gbuf);
    for (std::size_t i = 0; i < sys.n; ++i) out[i] = fbuf[i] + gbuf[i];
  }
};

// Sliding-window componentwise maximum over the growing dense output: a
// monotone wedge of completed segments plus analytic handling of the partial
// front segment and the in-progress tail.
class WindowMax {
 public:
  WindowMax(const DenseStore& store, const HistorySegment& hist, double r,
            double t0)
      : store_(store), hist_(hist), r_(r), t0_(t0), wedges_(store.n) {}

  // Componentwise max over [t - r, t]; stage_value guards the current point.
  double query(std::size_t i, double t, double stage_value) {
    push_ready();
    const double lo = t - r_;
    double m = stage_value;

    if (lo < t0_) {
      m = std::max(m, hist_.sup_over(std::max(lo - t0_, -hist_.window()), 0.0)[i]);
    }

    auto& q = wedges_[i];
    while (!q.empty() && seg_end(q.front().k) <= lo) q.pop_front();
    if (!q.empty()) {
      const Rec& front = q.front();
      if (seg_start(front.k) < lo) {
        const double h = seg_end(front.k) - seg_start(front.k);
        const double ua = (lo - seg_start(front.k)) / h;
        m = std::max(m, hermite::max_on(store_.cubic(i, front.k), ua, 1.0));
        if (q.size() > 1) m = std::max(m, q[1].mx);
      } else {
        m = std::max(m, front.mx);
      }
    }

    // Tail past the last wedge-covered segment: provisional segment and, past
    // the stored end, the extrapolated previous cubic.
    const double pushed_end =
        pushed_ > 0 ? seg_end(pushed_ - 1) : store_.t_begin();
    const double tail_lo = std::max(lo, pushed_end);
    if (t > tail_lo) {
      if (store_.nodes() >= 2) {
        const std::size_t klast = store_.nodes() - 2;
        for (std::size_t k = pushed_; k <= klast; ++k) {
          const double a = std::max(tail_lo, seg_start(k));
          const double b = std::min(t, seg_end(k));
          if (b > a) {
            const double h = seg_end(k) - seg_start(k);
            m = std::max(m, hermite::max_on(store_.cubic(i, k),
                                            (a - seg_start(k)) / h,
                                            (b - seg_start(k)) / h));
          }
        }
        if (t > store_.t_end()) {
          const double h = seg_end(klast) - seg_start(klast);
          m = std::max(m, hermite::max_on(store_.cubic(i, klast), 1.0,
                                          (t - seg_start(klast)) / h));
        }
      } else if (t > store_.t_begin()) {
        // Single node: linear model, extremes at the ends.
        m = std::max(m, store_.eval_comp_extrapolated(i, t));
        m = std::max(m, store_.values[i]);
      }
    }
    return m;
  }

 private:
  struct Rec {
    std::size_t k;
    double mx;
  };

  double seg_start(std::size_t k) const { return store_.times[k]; }
  double seg_end(std::size_t k) const { return store_.times[k + 1]; }

  void push_ready() {
    while (store_.final_nodes >= 2 && pushed_ < store_.final_nodes - 1) {
      const std::size_t k = pushed_;
      for (std::size_t i = 0; i < store_.n; ++i) {
        const double mx = hermite::max_on(store_.cubic(i, k), 0.0, 1.0);
        auto& q = wedges_[i];
        while (!q.empty() && q.back().mx <= mx) q.pop_back();
        q.push_back({k, mx});
      }
      ++pushed_;
    }
  }

  const DenseStore& store_;
  const HistorySegment& hist_;
  double r_;
  double t0_;
  std::vector<std::deque<Rec>> wedges_;
  std::size_t pushed_ = 0;
};

struct BoundingRhs {
  const SystemDescriptor& sys;
  const DenseStore& store;
  WindowMax window;
  std::vector<Vec> sample;
  Vec fbuf, gbuf;
  double r;

  BoundingRhs(const SystemDescriptor& s, const HistorySegment& h,
              const DenseStore& st, double t0)
      : sys(s),
        store(st),
        window(st, h, s.r, t0),
        sample(1, Vec(s.n)),
        fbuf(s.n),
        gbuf(s.n),
        r(s.r) {}

  void operator()(double t, std::span<const double> x, std::span<double> out) {
    Vec& w = sample[0];
    if (r == 0.0) {
      std::copy(x.begin(), x.end(), w.begin());
    } else {
      for (std::size_t i = 0; i < sys.n; ++i) w[i] = window.query(i, t, x[i]);
    }
    sys.f(x, fbuf);
    std::fill(gbuf.begin(), gbuf.end(), 0.0);
    sys.g(x, sample, gbuf);
    for (std::size_t i = 0; i < sys.n; ++i) out[i] = fbuf[i] + gbuf[i];
  }
};

DenseStore seed_store(std::size_t n, double t0, const Vec& x0) {
  DenseStore store;
  store.n = n;
  store.times.push_back(t0);
  store.values.assign(x0.begin(), x0.end());
  store.derivs.assign(n, 0.0);
  return store;
}

void check_history(const SystemDescriptor& sys, const HistorySegment& hist) {
  if (hist.dimension() != sys.n) {
    throw std::invalid_argument("history dimension mismatch");
  }
  if (hist.window() + 1e-12 < sys.r) {
    throw ConfigError("history window shorter than the delay bound r");
  }
}

double dde_step(const SystemDescriptor& sys, const IntegratorConfig& cfg) {
  if (sys.r > 0.0) return std::min(cfg.step, sys.r / 20.0);
  return cfg.step;
}

}  // namespace

DenseTrajectory integrate_ode(const SystemDescriptor& sys, const Vec& x0,
                              double t0, double t1,
                              const IntegratorConfig& cfg) {
  check_start_state(sys, x0);
  const StepGrid grid = make_grid(t0, t1, cfg.step, cfg);
  DenseStore store = seed_store(sys.n, t0, x0);
  store.times.reserve(grid.steps + 1);
  store.values.reserve((grid.steps + 1) * sys.n);
  store.derivs.reserve((grid.steps + 1) * sys.n);
  UndelayedRhs rhs(sys, /*reversed=*/false);
  const std::size_t nodes = rk4_drive(store, t0, grid, cfg, rhs, nullptr);
  return store.finalize(nodes);
}

BackwardResult integrate_ode_backward(const SystemDescriptor& sys,
                                      const Vec& x0, double T_back,
                                      const IntegratorConfig& cfg) {
  check_start_state(sys, x0);
  if (!(T_back > 0.0)) throw std::invalid_argument("T_back must be positive");
  const StepGrid grid = make_grid(0.0, T_back, cfg.step, cfg);
  DenseStore store = seed_store(sys.n, 0.0, x0);
  UndelayedRhs rhs(sys, /*reversed=*/true);
  bool stopped = false;
  std::size_t nodes = rk4_drive(store, 0.0, grid, cfg, rhs, &stopped);
  if (nodes < 2) {
    throw DivergenceError("backward integration failed on the first step", 0.0,
                          nullptr);
  }

  // Reverse the reversed-time record into a trajectory on [-T_actual, 0].
  std::vector<double> ts(nodes);
  std::vector<Vec> vs(nodes), ds(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    const std::size_t k = nodes - 1 - j;
    ts[j] = -store.times[k];
    vs[j].assign(store.values.begin() + static_cast<std::ptrdiff_t>(k * sys.n),
                 store.values.begin() + static_cast<std::ptrdiff_t>((k + 1) * sys.n));
    ds[j].resize(sys.n);
    for (std::size_t i = 0; i < sys.n; ++i) {
      ds[j][i] = -store.derivs[k * sys.n + i];
    }
  }
  BackwardResult out{DenseTrajectory::from_nodes(std::move(ts), std::move(vs),
                                                 std::move(ds)),
                     !stopped};
  return out;
}

DenseTrajectory integrate_dde(const SystemDescriptor& sys,
                              const HistorySegment& history, double t0,
                              double t1, const IntegratorConfig& cfg) {
  check_history(sys, history);
  const Vec x0 = history.eval(0.0);
  require_finite(x0, "history head");
  if (sys.coupling == CouplingKind::WindowSup) {
    return integrate_bounding(sys, history, t0, t1, cfg);
  }
  if (sys.r == 0.0 || sys.delay_count() == 0) {
    IntegratorConfig ode_cfg = cfg;
    return integrate_ode(sys, x0, t0, t1, ode_cfg);
  }
  IntegratorConfig run_cfg = cfg;
  run_cfg.step = dde_step(sys, cfg);
  const StepGrid grid = make_grid(t0, t1, run_cfg.step, run_cfg);
  DenseStore store = seed_store(sys.n, t0, x0);
  store.times.reserve(grid.steps + 1);
  store.values.reserve((grid.steps + 1) * sys.n);
  store.derivs.reserve((grid.steps + 1) * sys.n);
  DdeRhs rhs(sys, history, store, t0);
  const std::size_t nodes = rk4_drive(store, t0, grid, run_cfg, rhs, nullptr);
  return store.finalize(nodes);
}

DenseTrajectory integrate_bounding(const SystemDescriptor& sys_bounding,
                                   const HistorySegment& history, double t0,
                                   double t1, const IntegratorConfig& cfg) {
  if (sys_bounding.coupling != CouplingKind::WindowSup) {
    throw ConfigError(
        "integrate_bounding expects a descriptor from make_bounding_system");
  }
  check_history(sys_bounding, history);
  const Vec x0 = history.eval(0.0);
  require_finite(x0, "history head");
  IntegratorConfig run_cfg = cfg;
  run_cfg.step = dde_step(sys_bounding, cfg);
  const StepGrid grid = make_grid(t0, t1, run_cfg.step, run_cfg);
  DenseStore store = seed_store(sys_bounding.n, t0, x0);
  BoundingRhs rhs(sys_bounding, history, store, t0);
  const std::size_t nodes = rk4_drive(store, t0, grid, run_cfg, rhs, nullptr);
  return store.finalize(nodes);
}

std::optional<double> first_crossing(const DenseTrajectory& traj,
                                     const EventSpec& ev) {
  const std::size_t i = ev.component;
  if (i >= traj.dimension()) {
    throw std::invalid_argument("first_crossing: component index");
  }
  const bool down = ev.direction == EventSpec::Direction::Downward;
  // Work with q(t) = sign * (x_i(t) - threshold); a crossing is the first
  // zero of q reached from q > 0.
  const double sign = down ? 1.0 : -1.0;
  const auto& bp = traj.breakpoints();
  if (sign * (traj.eval_component(i, bp.front()) - ev.threshold) <= 0.0) {
    return std::nullopt;
  }

  for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
    const hermite::Cubic c = traj.segment_cubic(i, k);
    const double h = bp[k + 1] - bp[k];
    const bool reachable = down ? hermite::min_on(c, 0.0, 1.0) <= ev.threshold
                                : hermite::max_on(c, 0.0, 1.0) >= ev.threshold;
    if (!reachable) continue;
    // Candidate knots: segment ends plus interior critical points keep the
    // cubic monotone between consecutive candidates.
    double us[4] = {0.0, 1.0, 1.0, 1.0};
    int cnt = 2;
    {
      const double A = 3.0 * c.d, B = 2.0 * c.c, C = c.b;
      if (std::abs(A) > 0.0) {
        const double disc = B * B - 4.0 * A * C;
        if (disc >= 0.0) {
          const double sq = std::sqrt(disc);
          const double q = -0.5 * (B + (B >= 0.0 ? sq : -sq));
          const double r1 = q / A;
          const double r2 = (q != 0.0) ? C / q : r1;
          if (r1 > 0.0 && r1 < 1.0) us[cnt++] = r1;
          if (r2 > 0.0 && r2 < 1.0 && r2 != r1) us[cnt++] = r2;
        }
      } else if (B != 0.0) {
        const double r1 = -C / B;
        if (r1 > 0.0 && r1 < 1.0) us[cnt++] = r1;
      }
    }
    std::sort(us, us + cnt);

    double prev_u = 0.0;
    if (sign * (c.eval(0.0) - ev.threshold) <= 0.0) {
      return bp[k];  // touched exactly at the knot
    }
    for (int j = 1; j < cnt; ++j) {
      const double u = us[j];
      if (sign * (c.eval(u) - ev.threshold) <= 0.0) {
        double a = prev_u, b = u;
        const double u_tol = 1e-10 / h;
        while (b - a > u_tol) {
          const double mid = 0.5 * (a + b);
          if (sign * (c.eval(mid) - ev.threshold) <= 0.0) {
            b = mid;
          } else {
            a = mid;
          }
        }
        return bp[k] + b * h;
      }
      prev_u = u;
    }
  }
  return std::nullopt;
}

}  // namespace monocert
