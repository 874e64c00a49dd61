#include "monocert/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "monocert/catalog.hpp"
#include "monocert/certify.hpp"
#include "monocert/csvio.hpp"
#include "monocert/integrate.hpp"
#include "monocert/random.hpp"
#include "monocert/razumikhin.hpp"
#include "monocert/validators.hpp"

namespace monocert {

bool SuiteReport::all_passed() const {
  return std::all_of(properties.begin(), properties.end(),
                     [](const PropertyResult& p) { return p.passed; });
}

bool SuiteReport::vacuous() const {
  return !properties.empty() &&
         std::all_of(properties.begin(), properties.end(),
                     [](const PropertyResult& p) { return p.no_evidence; });
}

namespace {

struct SuiteSystem {
  std::string name;
  SystemDescriptor sys;
  Box box;          // sampling domain for validators and histories
  Vec corner;       // point with nonpositive undelayed field, for domination
  double t_short = 10.0;
};

// The monotone domain of the orthant-cooperative catalog systems is the cone
// above the equilibrium; sampling stays there.
Box default_box(const SystemDescriptor& sys, const Vec& y0) {
  Vec lo(sys.n), hi(sys.n);
  for (std::size_t i = 0; i < sys.n; ++i) {
    const double scale = std::max({1.0, std::abs(y0[i]),
                                   std::abs(sys.equilibrium[i])});
    lo[i] = sys.equilibrium[i];
    hi[i] = sys.equilibrium[i] + 1.5 * scale;
  }
  return Box(std::move(lo), std::move(hi));
}

std::vector<SuiteSystem> systems_under_test(const SuiteConfig& cfg) {
  std::vector<SuiteSystem> out;
  if (!cfg.system_filter.empty()) {
    SystemDescriptor sys = resolve_system(cfg.system_filter);
    const CatalogEntry* e = find_catalog_entry(cfg.system_filter);
    const Vec y0 = e ? e->default_y0 : Vec(sys.n, 1.0);
    Box box = default_box(sys, y0);
    out.push_back({sys.name, sys, box, Vec(sys.n, 0.5)});
    return out;
  }
  for (const CatalogEntry& e : catalog()) {
    if (e.fixture) continue;
    SystemDescriptor sys = e.build(e.default_r);
    Box box = default_box(sys, e.default_y0);
    Vec corner;
    if (e.name == "example15") {
      corner = Vec{1.0, 1.0};
    } else if (e.name == "linear") {
      corner = Vec{1.0, 1.0};
    } else {
      // Operate on the origin-shifted version for domination batteries.
      sys = shift_to_origin(sys, ShiftDirection::Above);
      box = Box(Vec(sys.n, -0.8), Vec(sys.n, 0.8));
      corner = Vec(sys.n, 0.5);
    }
    out.push_back({e.name, std::move(sys), std::move(box), std::move(corner)});
  }
  return out;
}

SystemDescriptor scalar_exp_system() {
  Field f = [](std::span<const double> x, std::span<double> out) {
    out[0] = -x[0];
  };
  Coupling g = [](std::span<const double>, std::span<const Vec>,
                  std::span<double> out) { out[0] = 0.0; };
  return SystemDescriptor::make("scalar_exp", 1, 0.0, std::move(f),
                                std::move(g), {}, Vec{0.0});
}

IntegratorConfig icfg_default() {
  IntegratorConfig c;
  c.step = 0.01;
  return c;
}

class Battery {
 public:
  explicit Battery(const SuiteConfig& cfg) : cfg_(cfg) {}

  std::size_t scaled(std::size_t base) const {
    return static_cast<std::size_t>(std::llround(
        static_cast<double>(base) * std::max(0.0, cfg_.trials_scale)));
  }

  template <typename Fn>
  void run(const std::string& name, std::size_t base_trials, Fn&& fn) {
    PropertyResult res;
    res.name = name;
    res.trials = scaled(base_trials);
    const auto start = std::chrono::steady_clock::now();
    if (res.trials == 0) {
      res.passed = true;
      res.no_evidence = true;
      res.witness = "no evidence: zero trials";
    } else {
      try {
        fn(res);
      } catch (const std::exception& e) {
        res.passed = false;
        res.witness = std::string("exception: ") + e.what();
      }
    }
    res.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    results.push_back(std::move(res));
  }

  std::vector<PropertyResult> results;

 private:
  const SuiteConfig& cfg_;
};

void set_witness(PropertyResult& res, std::uint64_t seed, std::size_t trial,
                 const std::string& what) {
  res.passed = false;
  std::ostringstream os;
  os << "seed=" << seed << " trial=" << trial << ": " << what;
  res.witness = os.str();
}

DenseTrajectory random_synthetic_trajectory(Rng& rng, std::size_t n,
                                            std::size_t segments) {
  std::vector<double> times(segments + 1);
  std::vector<Vec> values(segments + 1), derivs(segments + 1);
  double t = 0.0;
  for (std::size_t k = 0; k <= segments; ++k) {
    times[k] = t;
    t += rng.uniform(0.2, 1.0);
    Vec v(n), d(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = rng.uniform(-1.0, 3.0);
      d[i] = rng.uniform(-2.0, 2.0);
    }
    values[k] = std::move(v);
    derivs[k] = std::move(d);
  }
  return DenseTrajectory::from_nodes(std::move(times), std::move(values),
                                     std::move(derivs));
}

HistorySegment pointwise_min(const HistorySegment& a, const HistorySegment& b,
                             std::size_t n, double r) {
  return HistorySegment::from_function(n, r, [a, b, n](double theta) {
    Vec va = a.eval(theta), vb = b.eval(theta);
    Vec out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::min(va[i], vb[i]);
    return out;
  });
}

HistorySegment pointwise_max(const HistorySegment& a, const HistorySegment& b,
                             std::size_t n, double r) {
  return HistorySegment::from_function(n, r, [a, b, n](double theta) {
    Vec va = a.eval(theta), vb = b.eval(theta);
    Vec out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::max(va[i], vb[i]);
    return out;
  });
}

}  // namespace

SuiteReport run_suite(const SuiteConfig& cfg) {
  const auto suite_start = std::chrono::steady_clock::now();
  Battery bat(cfg);
  const std::uint64_t seed = cfg.seed;
  const std::vector<SuiteSystem> systems = systems_under_test(cfg);
  const bool filtered = !cfg.system_filter.empty();

  // ---- core -------------------------------------------------------------

  bat.run("core.order_consistency", 1000, [&](PropertyResult& res) {
    for (std::size_t t = 0; t < res.trials; ++t) {
      Rng rng(split_seed(seed, 20, t));
      const std::size_t n = 1 + rng.index(4);
      Vec a(n), b(n);
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = rng.uniform(-5.0, 5.0);
        b[i] = rng.uniform(-5.0, 5.0);
      }
      const double margin = rng.uniform(0.0, 0.2);
      if (cmp_ll(a, b, margin) && !cmp_leq(a, b)) {
        set_witness(res, seed, t, "strict order without weak order");
        return;
      }
    }
  });

  bat.run("core.running_min_envelope", 50, [&](PropertyResult& res) {
    for (std::size_t t = 0; t < res.trials; ++t) {
      Rng rng(split_seed(seed, 21, t));
      const DenseTrajectory traj =
          random_synthetic_trajectory(rng, 1 + rng.index(3), 8);
      const double a = traj.t_begin(), b = traj.t_end();
      double prev = std::numeric_limits<double>::infinity();
      for (int j = 0; j <= 1000; ++j) {
        const double tt = a + (b - a) * j / 1000.0;
        for (std::size_t i = 0; i < traj.dimension(); ++i) {
          const double m = traj.running_min(i, tt);
          if (m > traj.eval_component(i, tt) + 1e-12) {
            set_witness(res, seed, t, "running min above the trajectory");
            return;
          }
          if (i == 0) {
            if (m > prev + 1e-12) {
              set_witness(res, seed, t, "running min increased");
              return;
            }
            prev = m;
          }
        }
      }
    }
  });

  bat.run("core.window_sup_dominates", 100, [&](PropertyResult& res) {
    const Box box(Vec{0.0, 0.0}, Vec{2.0, 3.0});
    for (std::size_t t = 0; t < res.trials; ++t) {
      Rng rng(split_seed(seed, 22, t));
      const double r = rng.uniform(0.3, 2.0);
      const HistorySegment h = random_history(rng, box, r);
      const Vec sup = window_sup(h);
      Vec best(h.dimension(), -std::numeric_limits<double>::infinity());
      for (int j = 0; j <= 1024; ++j) {
        const double theta = -r + r * j / 1024.0;
        const Vec v = h.eval(theta);
        for (std::size_t i = 0; i < h.dimension(); ++i) {
          if (v[i] > sup[i] + 1e-9) {
            set_witness(res, seed, t, "window sup undercut a sample");
            return;
          }
          best[i] = std::max(best[i], v[i]);
        }
      }
      // Attainment tolerance scales with the local sample variation, so
      // kinked histories are judged at their own resolution.
      for (std::size_t i = 0; i < h.dimension(); ++i) {
        double local = 0.0;
        for (int j = 1; j <= 1024; ++j) {
          const double va = h.eval(-r + r * (j - 1) / 1024.0)[i];
          const double vb = h.eval(-r + r * j / 1024.0)[i];
          local = std::max(local, std::abs(vb - va));
        }
        if (best[i] < sup[i] - 2.0 * local - 1e-9) {
          set_witness(res, seed, t, "window sup not attained by samples");
          return;
        }
      }
    }
  });

  // ---- systems ----------------------------------------------------------

  bat.run("systems.const_arg_time_invariance", 10000, [&](PropertyResult& res) {
    for (const SuiteSystem& ss : systems) {
      for (std::size_t t = 0; t < res.trials; ++t) {
        Rng rng(split_seed(seed, 23, t));
        const Vec v = random_point(rng, ss.box);
        const double tt = rng.uniform(0.0, 50.0);
        const Vec del = eval_delayed_field(
            ss.sys, tt, HistorySegment::constant(v, ss.sys.r));
        const Vec und = eval_undelayed_field(ss.sys, v);
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (del[i] != und[i]) {
            set_witness(res, seed, t,
                        ss.name + ": delayed field at a constant history "
                                  "differs from the undelayed field");
            return;
          }
        }
      }
    }
  });

  bat.run("systems.shift_origin_zero", 1, [&](PropertyResult& res) {
    for (const CatalogEntry& e : catalog()) {
      if (e.fixture) continue;
      const SystemDescriptor base = e.build(e.default_r);
      std::vector<ShiftDirection> dirs{ShiftDirection::Above};
      if (e.monotone_everywhere) dirs.push_back(ShiftDirection::Below);
      for (ShiftDirection dir : dirs) {
        const SystemDescriptor s = shift_to_origin(base, dir);
        const Vec at0 = eval_undelayed_field(s, Vec(s.n, 0.0));
        if (inf_norm(at0) > kOrderEps) {
          set_witness(res, seed, 0, e.name + ": shifted field nonzero at 0");
          return;
        }
      }
    }
  });

  bat.run("systems.bounding_dominates_field", 1000, [&](PropertyResult& res) {
    for (const SuiteSystem& ss : systems) {
      if (ss.sys.r == 0.0) continue;
      const SystemDescriptor bounding = make_bounding_system(ss.sys);
      for (std::size_t t = 0; t < res.trials; ++t) {
        Rng rng(split_seed(seed, 24, t));
        const HistorySegment h = random_history(rng, ss.box, ss.sys.r);
        const double tt = rng.uniform(0.0, 20.0);
        const Vec del = eval_delayed_field(ss.sys, tt, h);
        const Vec bnd = eval_delayed_field(bounding, 0.0, h);
        for (std::size_t i = 0; i < del.size(); ++i) {
          if (del[i] > bnd[i] + 1e-9) {
            set_witness(res, seed, t,
                        ss.name + ": delayed field exceeded the bounding field");
            return;
          }
        }
      }
    }
  });

  bat.run("systems.catalog_monotone", 10000, [&](PropertyResult& res) {
    for (const SuiteSystem& ss : systems) {
      const MonotonicityReport rep =
          check_quasimonotonicity(ss.sys, res.trials, ss.box, seed);
      if (!rep.passed()) {
        const Violation& v = rep.violations.front();
        set_witness(res, seed, v.trial,
                    ss.name + ": " + v.property + " violated in component " +
                        std::to_string(v.component));
        return;
      }
    }
  });

  if (!filtered) {
    bat.run("systems.fixture_flagged", 1000, [&](PropertyResult& res) {
      const SystemDescriptor fix = resolve_system("nonmonotone_fixture");
      const Box box(Vec{0.0, 0.0}, Vec{5.0, 5.0});
      const MonotonicityReport rep =
          check_quasimonotonicity(fix, res.trials, box, seed);
      if (rep.passed()) {
        set_witness(res, seed, 0,
                    "planted non-monotone fixture produced no violations");
      }
    });

    bat.run("systems.subhomogeneity_linear_pass", 1000,
            [&](PropertyResult& res) {
      const SystemDescriptor lin = resolve_system("linear");
      const Box box(Vec{0.0, 0.0}, Vec{5.0, 5.0});
      const SubhomogeneityReport rep =
          check_subhomogeneity(lin, 1.0, res.trials, box, seed);
      if (!rep.passed()) {
        const Violation& v = rep.violations.front();
        set_witness(res, seed, v.trial,
                    "linear system flagged: " + v.property + " lambda=" +
                        std::to_string(v.lambda));
      }
    });

    bat.run("systems.subhomogeneity_example15_flagged", 2000,
            [&](PropertyResult& res) {
      const SystemDescriptor ex = resolve_system("example15");
      const Box box(Vec{0.0, 0.0}, Vec{5.0, 5.0});
      const SubhomogeneityReport rep =
          check_subhomogeneity(ex, 1.0, res.trials, box, seed);
      if (rep.passed()) {
        set_witness(res, seed, 0,
                    "example15 not flagged as non-subhomogeneous");
      }
    });
  }

  // ---- integrate ---------------------------------------------------------

  bat.run("integrate.order_preservation", 100, [&](PropertyResult& res) {
    IntegratorConfig icfg;
    icfg.step = 0.01;
    for (const SuiteSystem& ss : systems) {
      for (std::size_t t = 0; t < res.trials; ++t) {
        Rng rng(split_seed(seed, 25, t));
        std::vector<DelaySignal> delays;
        for (std::size_t j = 0; j < ss.sys.delay_count(); ++j) {
          delays.push_back(random_delay(rng, ss.sys.r, 0.2));
        }
        const SystemDescriptor sys_t = ss.sys.with_delays(delays);
        const HistorySegment h1 = random_history(rng, ss.box, ss.sys.r);
        const HistorySegment h2 = random_history(rng, ss.box, ss.sys.r);
        const HistorySegment lo = pointwise_min(h1, h2, ss.sys.n, ss.sys.r);
        const HistorySegment hi = pointwise_max(h1, h2, ss.sys.n, ss.sys.r);
        const DenseTrajectory xlo =
            integrate_dde(sys_t, lo, 0.0, ss.t_short, icfg);
        const DenseTrajectory xhi =
            integrate_dde(sys_t, hi, 0.0, ss.t_short, icfg);
        std::string w;
        if (!trajectory_dominated(xlo, xhi, 1e-6, &w)) {
          set_witness(res, seed, t, ss.name + ": order broken, " + w);
          return;
        }
      }
    }
  });

  bat.run("integrate.bounding_domination", 50, [&](PropertyResult& res) {
    IntegratorConfig icfg;
    icfg.step = 0.01;
    for (const SuiteSystem& ss : systems) {
      if (ss.sys.r == 0.0) continue;
      const SystemDescriptor bounding = make_bounding_system(ss.sys);
      const DenseTrajectory z = integrate_bounding(
          bounding, HistorySegment::constant(ss.corner, ss.sys.r), 0.0,
          ss.t_short, icfg);
      const Box hist_box(Vec(ss.sys.n, 0.0), ss.corner);
      for (std::size_t t = 0; t < res.trials; ++t) {
        Rng rng(split_seed(seed, 26, t));
        std::vector<DelaySignal> delays;
        for (std::size_t j = 0; j < ss.sys.delay_count(); ++j) {
          delays.push_back(random_delay(rng, ss.sys.r, 0.2));
        }
        const SystemDescriptor sys_t = ss.sys.with_delays(delays);
        const HistorySegment h = random_history(rng, hist_box, ss.sys.r);
        const DenseTrajectory x = integrate_dde(sys_t, h, 0.0, ss.t_short, icfg);
        std::string w;
        if (!trajectory_dominated(x, z, 1e-6, &w)) {
          set_witness(res, seed, t, ss.name + ": domination broken, " + w);
          return;
        }
      }
    }
  });

  bat.run("integrate.monotone_decrease", 1, [&](PropertyResult& res) {
    IntegratorConfig icfg;
    icfg.step = 0.01;
    for (const SuiteSystem& ss : systems) {
      if (ss.sys.r == 0.0) continue;
      const Vec field = eval_undelayed_field(ss.sys, ss.corner);
      bool nonpos = true;
      for (double v : field) nonpos = nonpos && v <= kOrderEps;
      if (!nonpos) continue;
      const SystemDescriptor bounding = make_bounding_system(ss.sys);
      const DenseTrajectory z = integrate_bounding(
          bounding, HistorySegment::constant(ss.corner, ss.sys.r), 0.0,
          ss.t_short, icfg);
      for (std::size_t k = 0; k + 1 < z.breakpoints().size(); ++k) {
        for (std::size_t i = 0; i < z.dimension(); ++i) {
          if (z.node_value(k + 1, i) > z.node_value(k, i) + 1e-8) {
            set_witness(res, seed, k,
                        ss.name + ": bounding run increased in component " +
                            std::to_string(i + 1));
            return;
          }
        }
      }
    }
  });

  bat.run("integrate.step_halving_order", 1, [&](PropertyResult& res) {
    const SystemDescriptor sys = scalar_exp_system();
    auto endpoint = [&](double h) {
      IntegratorConfig icfg;
      icfg.step = h;
      return integrate_ode(sys, Vec{1.0}, 0.0, 1.0, icfg).eval(1.0)[0];
    };
    const double exact = std::exp(-1.0);
    const double e1 = std::abs(endpoint(0.1) - exact);
    const double e2 = std::abs(endpoint(0.05) - exact);
    const double order = std::log2(e1 / e2);
    if (!(order >= 3.5)) {
      set_witness(res, seed, 0,
                  "scalar observed order " + std::to_string(order));
      return;
    }
    const SystemDescriptor lin = resolve_system("linear");
    auto endpoint2 = [&](double h) {
      IntegratorConfig icfg;
      icfg.step = h;
      return integrate_ode(lin, Vec{1.0, 2.0}, 0.0, 5.0, icfg).eval(5.0);
    };
    const Vec ref = endpoint2(0.00125);
    const double d1 = inf_norm(endpoint2(0.1) - ref);
    const double d2 = inf_norm(endpoint2(0.05) - ref);
    const double order2 = std::log2(d1 / d2);
    if (!(order2 >= 3.5)) {
      set_witness(res, seed, 0,
                  "linear observed order " + std::to_string(order2));
    }
  });

  bat.run("integrate.positivity", 50, [&](PropertyResult& res) {
    IntegratorConfig icfg;
    icfg.step = 0.01;
    for (const SuiteSystem& ss : systems) {
      Vec hi = ss.box.upper;
      const Box pos_box(Vec(ss.sys.n, 0.0), hi);
      for (std::size_t t = 0; t < res.trials; ++t) {
        Rng rng(split_seed(seed, 27, t));
        std::vector<DelaySignal> delays;
        for (std::size_t j = 0; j < ss.sys.delay_count(); ++j) {
          delays.push_back(random_delay(rng, ss.sys.r, 0.2));
        }
        const SystemDescriptor sys_t = ss.sys.with_delays(delays);
        const HistorySegment h = random_history(rng, pos_box, ss.sys.r);
        const DenseTrajectory x = integrate_dde(sys_t, h, 0.0, ss.t_short, icfg);
        for (std::size_t i = 0; i < x.dimension(); ++i) {
          if (x.min_over(i, x.t_begin(), x.t_end()) < -1e-9) {
            set_witness(res, seed, t,
                        ss.name + ": left the nonnegative orthant");
            return;
          }
        }
      }
    }
  });

  // ---- certify ------------------------------------------------------------

  // Shared profile for the Razumikhin identities.
  bat.run("certify.V_identity_and_T_monotone", 1000, [&](PropertyResult& res) {
    const SystemDescriptor ex = resolve_system("example15");
    IntegratorConfig icfg;
    icfg.step = 0.01;
    auto traj = std::make_shared<DenseTrajectory>(
        integrate_ode(ex, example15_y0(2.0), 0.0, 60.0, icfg));
    const RazumikhinProfile prof = RazumikhinProfile::forward(traj);
    const Vec y0 = traj->node(0);
    for (std::size_t t = 0; t < res.trials; ++t) {
      Rng rng(split_seed(seed, 28, t));
      Vec x(2);
      for (std::size_t i = 0; i < 2; ++i) x[i] = rng.uniform(0.0, y0[i]);
      double tmin = std::numeric_limits<double>::infinity();
      double vmax = 0.0;
      for (std::size_t i = 0; i < 2; ++i) {
        const double Ti = prof.crossing_time(i, x[i]).time;
        tmin = std::min(tmin, Ti);
        vmax = std::max(vmax, std::exp(-Ti));
      }
      if (std::abs(vmax - std::exp(-tmin)) > 1e-12) {
        set_witness(res, seed, t, "V != exp(-T)");
        return;
      }
      if (std::abs(prof.value(x) - vmax) > 1e-12) {
        set_witness(res, seed, t, "profile value disagrees with max of V_i");
        return;
      }
    }
    // T nonincreasing in the level; h(u) >= u.
    for (std::size_t i = 0; i < 2; ++i) {
      double prev_T = -1.0;
      for (int j = 100; j >= 1; --j) {
        const double level = y0[i] * j / 100.0;
        const double Ti = prof.crossing_time(i, level).time;
        if (Ti < prev_T - 1e-10) {
          set_witness(res, seed, i, "T increased as the level decreased");
          return;
        }
        prev_T = Ti;
      }
      for (int j = 0; j <= 100; ++j) {
        const double u = 60.0 * j / 100.0;
        if (prof.gap_time(i, u).time < u - 1e-10) {
          set_witness(res, seed, i, "gap time below its argument");
          return;
        }
      }
    }
    // Left-continuity in the level, spot-checked where the envelope is
    // strictly decreasing (T is ill-conditioned only across flats).
    {
      const SystemDescriptor dec = scalar_exp_system();
      auto etraj = std::make_shared<DenseTrajectory>(
          integrate_ode(dec, Vec{1.0}, 0.0, 10.0, icfg_default()));
      const RazumikhinProfile ep = RazumikhinProfile::forward(etraj);
      for (double a : {0.9, 0.5, 0.2}) {
        const double gap_left = ep.crossing_time(0, a - 1e-9).time -
                                ep.crossing_time(0, a).time;
        if (gap_left < -1e-10 || gap_left > 1e-5) {
          set_witness(res, seed, 0, "T not left-continuous at sampled levels");
          return;
        }
      }
    }
  });

  bat.run("certify.zeta_shortcut_matches_definition", 20,
          [&](PropertyResult& res) {
    // Fixture grid with known envelope values.
    {
      const DenseTrajectory grid = DenseTrajectory::from_linear(
          {0.0, 1.0, 2.0, 3.0, 4.0},
          {Vec{1.0}, Vec{0.6}, Vec{0.8}, Vec{0.3}, Vec{0.1}});
      const RazumikhinProfile prof =
          RazumikhinProfile::forward(std::make_shared<DenseTrajectory>(grid));
      const ZetaResult z = compute_zeta(prof, 1.5);
      if (std::abs(z.zeta[0] - 0.6) > 1e-9 || z.cross_check_error > 1e-9) {
        set_witness(res, seed, 0, "fixture grid zeta mismatch");
        return;
      }
      const double h15 = prof.gap_time(0, 1.5).time;
      if (std::abs(h15 - 2.4) > 1e-9) {
        set_witness(res, seed, 0,
                    "fixture grid gap time " + std::to_string(h15));
        return;
      }
    }
    for (std::size_t t = 0; t < res.trials; ++t) {
      Rng rng(split_seed(seed, 29, t));
      auto traj = std::make_shared<DenseTrajectory>(
          random_synthetic_trajectory(rng, 1 + rng.index(2), 10));
      const RazumikhinProfile prof = RazumikhinProfile::forward(traj);
      const double tp = rng.uniform(traj->t_begin(),
                                    0.5 * (traj->t_begin() + traj->t_end()));
      const ZetaResult z = compute_zeta(prof, tp);
      if (z.cross_check_error > 1e-6) {
        set_witness(res, seed, t,
                    "cross-check error " + std::to_string(z.cross_check_error));
        return;
      }
    }
  });

  bat.run("certify.zeta_strictly_decreasing_case", 1, [&](PropertyResult& res) {
    const SystemDescriptor sys = scalar_exp_system();
    IntegratorConfig icfg;
    icfg.step = 0.005;
    auto traj = std::make_shared<DenseTrajectory>(
        integrate_ode(sys, Vec{1.0}, 0.0, 10.0, icfg));
    const RazumikhinProfile prof = RazumikhinProfile::forward(traj);
    const double tp = 0.1;
    const double h = prof.gap_time(0, tp).time;
    if (std::abs(h - tp) > 1e-9) {
      set_witness(res, seed, 0, "gap time " + std::to_string(h) + " != tp");
      return;
    }
    const ZetaResult z = compute_zeta(prof, tp);
    if (std::abs(z.zeta[0] - traj->eval_component(0, tp)) > 1e-9) {
      set_witness(res, seed, 0, "zeta != y(tp) on a strictly decreasing run");
    }
  });

  bat.run("certify.zeta_linear_scaling", 1, [&](PropertyResult& res) {
    const SystemDescriptor lin = resolve_system("linear");
    IntegratorConfig icfg;
    icfg.step = 0.01;
    auto base = std::make_shared<DenseTrajectory>(
        integrate_ode(lin, Vec{5.0, 5.0}, 0.0, 40.0, icfg));
    const RazumikhinProfile prof = RazumikhinProfile::forward(base);
    const auto tp = select_tp(*base, 0.01);
    if (!tp) {
      set_witness(res, seed, 0, "no tp on the linear run");
      return;
    }
    const ZetaResult z1 = compute_zeta(prof, *tp);
    for (double lambda : {2.0, 10.0}) {
      auto scaled = std::make_shared<DenseTrajectory>(integrate_ode(
          lin, Vec{5.0 * lambda, 5.0 * lambda}, 0.0, 40.0, icfg));
      const RazumikhinProfile prof_l = RazumikhinProfile::forward(scaled);
      const auto tp_l = select_tp(*scaled, 0.01);
      if (!tp_l || std::abs(*tp_l - *tp) > 1e-12) {
        set_witness(res, seed, 0, "tp not scale-invariant");
        return;
      }
      const ZetaResult zl = compute_zeta(prof_l, *tp_l);
      for (std::size_t i = 0; i < 2; ++i) {
        const double want = lambda * z1.zeta[i];
        if (std::abs(zl.zeta[i] - want) > 1e-8 * std::max(1.0, want)) {
          set_witness(res, seed, 0,
                      "zeta failed to scale linearly at lambda=" +
                          std::to_string(lambda));
          return;
        }
      }
    }
  });

  bat.run("certify.zeta_c_monotone", 1, [&](PropertyResult& res) {
    const SystemDescriptor lin = resolve_system("linear");
    IntegratorConfig icfg;
    icfg.step = 0.01;
    const BackwardResult bw = integrate_ode_backward(lin, Vec{1.0, 1.0}, 5.0, icfg);
    const DenseTrajectory fwd = integrate_ode(lin, Vec{1.0, 1.0}, 0.0, 60.0, icfg);
    auto full = std::make_shared<DenseTrajectory>(
        DenseTrajectory::concat(bw.traj, fwd));
    const RazumikhinProfile prof = RazumikhinProfile::two_sided(full);
    Vec prev;
    for (double c : {1.0, 2.0, 5.0, 10.0, 25.0, 50.0, 100.0}) {
      const ZetaResult z = compute_zeta_global(prof, c);
      if (!prev.empty() && !cmp_leq(prev, z.zeta)) {
        set_witness(res, seed, 0,
                    "zeta^c not monotone at c=" + std::to_string(c));
        return;
      }
      prev = z.zeta;
    }
    // Consistency at the seam: level 1 equals the forward envelope at 0.
    const ZetaResult z1 = compute_zeta_global(prof, 1.0);
    auto fwd_only = std::make_shared<DenseTrajectory>(fwd);
    const RazumikhinProfile prof_f = RazumikhinProfile::forward(fwd_only);
    const ZetaResult z0 = compute_zeta(prof_f, 0.0);
    for (std::size_t i = 0; i < 2; ++i) {
      if (std::abs(z1.zeta[i] - z0.zeta[i]) > 1e-9) {
        set_witness(res, seed, 0, "two-sided level 1 differs from forward tp=0");
        return;
      }
    }
  });

  bat.run("certify.sweep_dominated_in_verified_cert", 1,
          [&](PropertyResult& res) {
    const CatalogEntry* e = find_catalog_entry("linear");
    CertifyConfig ccfg;
    ccfg.t_end = e->default_t_end;
    ccfg.delta = e->default_delta;
    ccfg.step = 0.01;
    ccfg.trials = 10;
    ccfg.seed = seed;
    const Certificate cert =
        certify_region(e->build(e->default_r), Vec{5.0, 5.0}, ccfg);
    if (!cert.verified) {
      set_witness(res, seed, 0, "linear local certificate not verified");
      return;
    }
    const auto it = std::find_if(
        cert.checks.begin(), cert.checks.end(), [](const CheckResult& c) {
          return c.name == "sweep_dominated_by_bounding";
        });
    if (it == cert.checks.end() || !it->passed) {
      set_witness(res, seed, 0, "domination check missing or failed");
    }
  });

  // ---- harness ------------------------------------------------------------

  bat.run("harness.reproducibility", 1, [&](PropertyResult& res) {
    const CatalogEntry* e = find_catalog_entry("linear");
    CertifyConfig ccfg;
    ccfg.t_end = e->default_t_end;
    ccfg.delta = e->default_delta;
    ccfg.trials = 5;
    ccfg.seed = seed;
    const std::string j1 =
        certificate_to_json(certify_region(e->build(e->default_r),
                                           Vec{1.0, 1.0}, ccfg));
    const std::string j2 =
        certificate_to_json(certify_region(e->build(e->default_r),
                                           Vec{1.0, 1.0}, ccfg));
    if (j1 != j2) {
      set_witness(res, seed, 0, "certificate JSON not byte-identical");
      return;
    }
    IntegratorConfig icfg;
    icfg.step = 0.01;
    const SystemDescriptor lin = e->build(e->default_r);
    const std::string c1 = trajectory_csv_string(
        integrate_ode(lin, Vec{1.0, 1.0}, 0.0, 5.0, icfg));
    const std::string c2 = trajectory_csv_string(
        integrate_ode(lin, Vec{1.0, 1.0}, 0.0, 5.0, icfg));
    if (c1 != c2) set_witness(res, seed, 0, "CSV not byte-identical");
  });

  SuiteReport report;
  report.seed = seed;
  report.properties = std::move(bat.results);
  report.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    suite_start)
          .count();
  return report;
}

std::string suite_report_to_json(const SuiteReport& report, int indent) {
  nlohmann::ordered_json j;
  j["seed"] = report.seed;
  j["all_passed"] = report.all_passed();
  j["vacuous"] = report.vacuous();
  j["total_seconds"] = report.total_seconds;
  nlohmann::ordered_json props = nlohmann::ordered_json::array();
  for (const PropertyResult& p : report.properties) {
    nlohmann::ordered_json jp;
    jp["name"] = p.name;
    jp["passed"] = p.passed;
    jp["trials"] = p.trials;
    if (!p.witness.empty()) jp["witness"] = p.witness;
    if (p.no_evidence) jp["no_evidence"] = true;
    jp["seconds"] = p.seconds;
    props.push_back(std::move(jp));
  }
  j["properties"] = std::move(props);
  return j.dump(indent) + "\n";
}

}  // namespace monocert
