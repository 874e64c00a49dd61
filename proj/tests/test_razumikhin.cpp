#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "brute_oracle.hpp"
#include "monocert/catalog.hpp"
#include "monocert/integrate.hpp"
#include "monocert/razumikhin.hpp"

using namespace monocert;
using monocert::testing::BruteProfile;

namespace {

SystemDescriptor scalar_decay() {
  Field f = [](std::span<const double> x, std::span<double> o) { o[0] = -x[0]; };
  Coupling g = [](std::span<const double>, std::span<const Vec>,
                  std::span<double> o) { o[0] = 0.0; };
  return SystemDescriptor::make("scalar_decay", 1, 0.0, std::move(f),
                                std::move(g), {}, Vec{0.0});
}

std::shared_ptr<DenseTrajectory> exp_traj(double t_end, double h = 0.005) {
  IntegratorConfig c;
  c.step = h;
  return std::make_shared<DenseTrajectory>(
      integrate_ode(scalar_decay(), {1.0}, 0.0, t_end, c));
}

std::shared_ptr<DenseTrajectory> fixture_grid() {
  return std::make_shared<DenseTrajectory>(DenseTrajectory::from_linear(
      {0.0, 1.0, 2.0, 3.0, 4.0}, {{1.0}, {0.6}, {0.8}, {0.3}, {0.1}}));
}

}  // namespace

TEST_CASE("level time on the exponential") {
  const RazumikhinProfile p = RazumikhinProfile::forward(exp_traj(10.0));
  const auto t = p.crossing_time(0, 0.7);
  CHECK(t.resolved);
  CHECK(std::abs(t.time - (-std::log(0.7))) < 1e-6);
  CHECK(std::abs(t.time - 0.35667) < 1e-4);

  SUBCASE("level at the start value is immediate") {
    const auto t0 = p.crossing_time(0, 1.0);
    CHECK(t0.resolved);
    CHECK(t0.time == doctest::Approx(0.0).epsilon(1e-10));
  }
  SUBCASE("level above the start throws") {
    CHECK_THROWS_AS(p.crossing_time(0, 1.5), std::invalid_argument);
  }
  SUBCASE("level never undercut is horizon-capped and flagged") {
    const auto tq = p.crossing_time(0, -0.5);
    CHECK_FALSE(tq.resolved);
    CHECK(tq.time == doctest::Approx(10.0));
  }
}

TEST_CASE("level time on the fixture grid against brute force") {
  const auto traj = fixture_grid();
  const RazumikhinProfile p = RazumikhinProfile::forward(traj);
  const BruteProfile brute(*traj, 10000);

  const auto t = p.crossing_time(0, 0.7);
  CHECK(t.resolved);
  CHECK(std::abs(t.time - 0.75) < 1e-9);
  CHECK(std::abs(t.time - brute.level_time(0, 0.7)) <= brute.cell());

  SUBCASE("gap map") {
    CHECK(std::abs(p.gap_time(0, 1.5).time - 2.4) < 1e-9);
    CHECK(std::abs(p.gap_time(0, 1.5).time - brute.gap_time(0, 1.5)) <=
          brute.cell());
    // Strictly decreasing stretch: the gap time is the argument itself.
    CHECK(p.gap_time(0, 0.4).time == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(p.gap_time(0, 0.0).time == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("zeta") {
    const ZetaResult z = compute_zeta(p, 1.5);
    CHECK(z.zeta[0] == doctest::Approx(0.6).epsilon(1e-9));
    CHECK(z.cross_check_error <= 1e-9);
    CHECK(std::abs(z.zeta[0] - brute.zeta(0, 1.5)) < 1e-6);
  }
}

TEST_CASE("profile value identities") {
  const RazumikhinProfile p = RazumikhinProfile::forward(exp_traj(12.0));
  SUBCASE("V at the start is 1") {
    CHECK(p.value(Vec{1.0}) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("V(0.5) = 0.5 for the exponential") {
    CHECK(p.value(Vec{0.5}) == doctest::Approx(0.5).epsilon(1e-6));
  }
  SUBCASE("V = exp(-T)") {
    for (double a : {0.9, 0.6, 0.2}) {
      const double T = p.crossing_time(0, a).time;
      CHECK(p.value(Vec{a}) == doctest::Approx(std::exp(-T)).epsilon(1e-12));
    }
  }
  SUBCASE("out of domain throws") {
    CHECK_THROWS_AS(p.value(Vec{1.5}), std::out_of_range);
    CHECK_THROWS_AS(p.value(Vec{-0.5}), std::out_of_range);
  }
}

TEST_CASE("max rule for multi-component V") {
  // Two strictly decreasing components with different rates.
  std::vector<double> ts;
  std::vector<Vec> vs, ds;
  for (double t = 0.0; t <= 6.0 + 1e-12; t += 0.01) {
    ts.push_back(t);
    vs.push_back({std::exp(-t), 2.0 * std::exp(-0.5 * t)});
    ds.push_back({-std::exp(-t), -std::exp(-0.5 * t)});
  }
  auto traj = std::make_shared<DenseTrajectory>(
      DenseTrajectory::from_nodes(ts, vs, ds));
  const RazumikhinProfile p = RazumikhinProfile::forward(traj);
  // One component at its start value forces V = 1 regardless of the other.
  CHECK(p.value(Vec{1.0, 0.5}) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(p.value(Vec{0.2, 2.0}) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(p.value(Vec{0.5, 1.0}) < 1.0);
}

TEST_CASE("select_tp") {
  SUBCASE("exponential with margin 0.01 snaps to the first breakpoint") {
    const auto traj = exp_traj(2.0, 0.01);
    const auto tp = select_tp(*traj, 0.01);
    REQUIRE(tp.has_value());
    CHECK(*tp == doctest::Approx(0.02).epsilon(1e-12));
  }
  SUBCASE("constant trajectory has no tp") {
    const DenseTrajectory tr = DenseTrajectory::from_linear(
        {0.0, 1.0, 2.0}, {{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}});
    CHECK_FALSE(select_tp(tr, 0.01).has_value());
  }
  SUBCASE("example15 admits a tp") {
    IntegratorConfig c;
    c.step = 0.01;
    const DenseTrajectory tr = integrate_ode(
        resolve_system("example15"), example15_y0(2.0), 0.0, 30.0, c);
    const auto tp = select_tp(tr, 0.01);
    REQUIRE(tp.has_value());
    CHECK(*tp > 0.0);
  }
}

TEST_CASE("zeta on the exponential") {
  const RazumikhinProfile p = RazumikhinProfile::forward(exp_traj(10.0));
  const ZetaResult z = compute_zeta(p, 0.1);
  CHECK(z.zeta[0] == doctest::Approx(std::exp(-0.1)).epsilon(1e-6));
  CHECK(std::abs(z.zeta[0] - 0.90484) < 1e-4);
  CHECK(z.cross_check_error <= 1e-8);
}

TEST_CASE("random synthetic trajectories against brute force") {
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> val(-1.0, 3.0);
  std::uniform_real_distribution<double> slope(-2.0, 2.0);
  std::uniform_real_distribution<double> gap(0.2, 1.0);

  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 1 + (eng() % 2);
    std::vector<double> ts;
    std::vector<Vec> vs, ds;
    double t = 0.0;
    for (int k = 0; k <= 12; ++k) {
      ts.push_back(t);
      t += gap(eng);
      Vec v(n), d(n);
      for (std::size_t i = 0; i < n; ++i) {
        v[i] = val(eng);
        d[i] = slope(eng);
      }
      vs.push_back(v);
      ds.push_back(d);
    }
    auto traj = std::make_shared<DenseTrajectory>(
        DenseTrajectory::from_nodes(ts, vs, ds));
    const RazumikhinProfile p = RazumikhinProfile::forward(traj);
    const BruteProfile brute(*traj, 10000);

    for (std::size_t i = 0; i < n; ++i) {
      const double top = traj->node(0)[i];
      const double bottom = p.envelope(i, traj->t_end());
      for (int j = 1; j <= 25; ++j) {
        const double level = bottom + (top - bottom) * j / 26.0;
        const auto T = p.crossing_time(i, level);
        CHECK(std::abs(T.time - brute.level_time(i, level)) <=
              brute.cell() + 1e-9);
      }
      for (int j = 0; j <= 25; ++j) {
        const double u =
            traj->t_begin() +
            (traj->t_end() - traj->t_begin()) * j / 25.0 * 0.6;
        const auto h = p.gap_time(i, u);
        if (h.resolved) {
          CHECK(std::abs(h.time - brute.gap_time(i, u)) <= brute.cell() + 1e-9);
        }
      }
    }
    const double tp =
        traj->t_begin() + 0.3 * (traj->t_end() - traj->t_begin());
    const ZetaResult z = compute_zeta(p, tp);
    for (std::size_t i = 0; i < n; ++i) {
      if (!z.capped) {
        CHECK(std::abs(z.zeta[i] - brute.zeta(i, tp)) <= 1e-6 + 2.0 * brute.cell());
      }
    }
  }
}

TEST_CASE("two-sided profile and global corner points") {
  const SystemDescriptor sys = scalar_decay();
  IntegratorConfig c;
  c.step = 0.005;
  const BackwardResult bw = integrate_ode_backward(sys, {1.0}, 3.0, c);
  const DenseTrajectory fwd = integrate_ode(sys, {1.0}, 0.0, 10.0, c);
  auto full = std::make_shared<DenseTrajectory>(
      DenseTrajectory::concat(bw.traj, fwd));
  const RazumikhinProfile p = RazumikhinProfile::two_sided(full);

  SUBCASE("zeta^c = c for the exponential") {
    for (double cval : {1.0, 2.0, 5.0, 15.0}) {
      const ZetaResult z = compute_zeta_global(p, cval);
      CHECK_FALSE(z.window_limited);
      CHECK(z.zeta[0] == doctest::Approx(cval).epsilon(1e-6));
    }
  }
  SUBCASE("seam consistency with the forward profile at tp = 0") {
    const ZetaResult z1 = compute_zeta_global(p, 1.0);
    auto fptr = std::make_shared<DenseTrajectory>(fwd);
    const RazumikhinProfile pf = RazumikhinProfile::forward(fptr);
    const ZetaResult z0 = compute_zeta(pf, 0.0);
    CHECK(z1.zeta[0] == doctest::Approx(z0.zeta[0]).epsilon(1e-9));
  }
  SUBCASE("window-limited flag past the backward range") {
    const ZetaResult z = compute_zeta_global(p, std::exp(3.0) * 2.0);
    CHECK(z.window_limited);
    CHECK(z.zeta[0] == doctest::Approx(std::exp(3.0)).epsilon(1e-6));
  }
  SUBCASE("monotone in c") {
    Vec prev;
    for (double cval : {1.0, 1.5, 3.0, 8.0, 19.0}) {
      const ZetaResult z = compute_zeta_global(p, cval);
      if (!prev.empty()) CHECK(cmp_leq(prev, z.zeta));
      prev = z.zeta;
    }
  }
  SUBCASE("forward profiles reject global corners") {
    auto fptr = std::make_shared<DenseTrajectory>(fwd);
    const RazumikhinProfile pf = RazumikhinProfile::forward(fptr);
    CHECK_THROWS_AS(compute_zeta_global(pf, 2.0), std::invalid_argument);
  }
}

TEST_CASE("envelope invariants on an integrated run") {
  IntegratorConfig c;
  c.step = 0.01;
  auto traj = std::make_shared<DenseTrajectory>(integrate_ode(
      resolve_system("example15"), example15_y0(2.0), 0.0, 50.0, c));
  const RazumikhinProfile p = RazumikhinProfile::forward(traj);
  for (std::size_t i = 0; i < 2; ++i) {
    double prev = p.envelope(i, 0.0);
    for (int j = 1; j <= 1000; ++j) {
      const double t = 50.0 * j / 1000.0;
      const double m = p.envelope(i, t);
      CHECK(m <= prev + 1e-12);
      CHECK(m <= traj->eval_component(i, t) + 1e-12);
      prev = m;
    }
  }
}
