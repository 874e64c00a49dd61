#include <doctest.h>

#include <cmath>

#include "monocert/catalog.hpp"
#include "monocert/integrate.hpp"
#include "monocert/system.hpp"

using namespace monocert;

namespace {

SystemDescriptor scalar_decay() {
  Field f = [](std::span<const double> x, std::span<double> o) { o[0] = -x[0]; };
  Coupling g = [](std::span<const double>, std::span<const Vec>,
                  std::span<double> o) { o[0] = 0.0; };
  return SystemDescriptor::make("scalar_decay", 1, 0.0, std::move(f),
                                std::move(g), {}, Vec{0.0});
}

SystemDescriptor scalar_dde() {
  // dx/dt = -2 x(t) + x(t - d)
  Field f = [](std::span<const double> x, std::span<double> o) {
    o[0] = -2.0 * x[0];
  };
  Coupling g = [](std::span<const double>, std::span<const Vec> z,
                  std::span<double> o) { o[0] = z[0][0]; };
  return SystemDescriptor::make("scalar_dde", 1, 1.0, std::move(f),
                                std::move(g),
                                {DelaySignal::constant(1.0, 1.0)}, Vec{0.0});
}

SystemDescriptor quadratic_blowup() {
  Field f = [](std::span<const double> x, std::span<double> o) {
    o[0] = x[0] * x[0];
  };
  Coupling g = [](std::span<const double>, std::span<const Vec>,
                  std::span<double> o) { o[0] = 0.0; };
  return SystemDescriptor::make("blowup", 1, 0.0, std::move(f), std::move(g),
                                {}, Vec{0.0});
}

IntegratorConfig cfg(double h) {
  IntegratorConfig c;
  c.step = h;
  return c;
}

}  // namespace

TEST_CASE("scalar exponential decay endpoint") {
  const DenseTrajectory tr =
      integrate_ode(scalar_decay(), {1.0}, 0.0, 1.0, cfg(0.01));
  CHECK(tr.eval(1.0)[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
  CHECK(std::abs(tr.eval(1.0)[0] - std::exp(-1.0)) < 1e-6);
}

TEST_CASE("equilibrium start stays constant") {
  const SystemDescriptor sys = resolve_system("example15");
  const DenseTrajectory tr = integrate_ode(sys, {0.0, 0.0}, 0.0, 5.0, cfg(0.01));
  for (double t : {0.0, 2.5, 5.0}) {
    CHECK(inf_norm(tr.eval(t)) == 0.0);
  }
}

TEST_CASE("example15 undelayed decay toward the origin") {
  // Oracle: reference run at half step size. The approach to zero is
  // algebraic (the linearization has a zero eigenvalue), so the norm at
  // t = 40 sits near 3.5e-2, far from zero but shrinking.
  const SystemDescriptor sys = resolve_system("example15");
  const DenseTrajectory a = integrate_ode(sys, {2.2, 2.0}, 0.0, 40.0, cfg(0.01));
  const DenseTrajectory b = integrate_ode(sys, {2.2, 2.0}, 0.0, 40.0, cfg(0.005));
  const Vec xa = a.eval(40.0), xb = b.eval(40.0);
  CHECK(std::abs(xa[0] - xb[0]) < 1e-9);
  CHECK(std::abs(xa[1] - xb[1]) < 1e-9);
  CHECK(inf_norm(xa) == doctest::Approx(0.03510912).epsilon(1e-4));
  // Monotone decrease of the norm along a tail of checkpoints.
  double prev = inf_norm(a.eval(10.0));
  for (double t : {20.0, 30.0, 40.0}) {
    const double cur = inf_norm(a.eval(t));
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("backward integration") {
  SUBCASE("scalar closed form") {
    const BackwardResult bw =
        integrate_ode_backward(scalar_decay(), {1.0}, 3.0, cfg(0.01));
    CHECK(bw.reached_window);
    CHECK(bw.traj.t_begin() == doctest::Approx(-3.0));
    CHECK(bw.traj.eval(-3.0)[0] == doctest::Approx(std::exp(3.0)).epsilon(1e-8));
    CHECK(std::abs(bw.traj.eval(-3.0)[0] - 20.085536923187668) < 1e-4);
  }
  SUBCASE("linear catalog grows monotonically backward") {
    const BackwardResult bw = integrate_ode_backward(
        resolve_system("linear"), {1.0, 1.0}, 4.0, cfg(0.01));
    const auto& bp = bw.traj.breakpoints();
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
      for (std::size_t i = 0; i < 2; ++i) {
        CHECK(bw.traj.node_value(k, i) >= bw.traj.node_value(k + 1, i) - 1e-12);
      }
    }
  }
  SUBCASE("equilibrium is constant backward") {
    const BackwardResult bw = integrate_ode_backward(
        resolve_system("linear"), {0.0, 0.0}, 2.0, cfg(0.01));
    CHECK(inf_norm(bw.traj.eval(-2.0)) == 0.0);
  }
  SUBCASE("forward and backward runs concatenate") {
    const SystemDescriptor lin = resolve_system("linear");
    const BackwardResult bw =
        integrate_ode_backward(lin, {1.0, 1.0}, 2.0, cfg(0.01));
    const DenseTrajectory fwd = integrate_ode(lin, {1.0, 1.0}, 0.0, 2.0, cfg(0.01));
    const DenseTrajectory full = DenseTrajectory::concat(bw.traj, fwd);
    CHECK(full.t_begin() == doctest::Approx(-2.0));
    CHECK(full.t_end() == doctest::Approx(2.0));
    CHECK(full.eval(0.0)[0] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("divergence handling") {
  SUBCASE("forward blow-up throws with the last valid time") {
    bool thrown = false;
    try {
      integrate_ode(quadratic_blowup(), {10.0}, 0.0, 1.0, cfg(0.001));
    } catch (const DivergenceError& e) {
      thrown = true;
      CHECK(e.last_valid_time < 1.0);
      CHECK(e.last_valid_time > 0.0);
      REQUIRE(e.partial != nullptr);
      CHECK(e.partial->t_end() <= 1.0);
      CHECK(inf_norm(e.partial->eval(e.partial->t_end())) <= 1e12);
    }
    CHECK(thrown);
  }
  SUBCASE("backward divergence returns a flagged partial") {
    // Backward in time the decay becomes growth; a huge window blows up.
    const BackwardResult bw =
        integrate_ode_backward(scalar_decay(), {1.0}, 50.0, cfg(0.01));
    CHECK_FALSE(bw.reached_window);
    CHECK(bw.traj.t_begin() > -50.0);
    CHECK(bw.traj.eval(bw.traj.t_begin())[0] <= 1e12);
  }
}

TEST_CASE("delayed integration") {
  SUBCASE("zero history stays zero") {
    const SystemDescriptor sys = resolve_system("example15", 1.0);
    const DenseTrajectory tr = integrate_dde(
        sys, HistorySegment::constant({0.0, 0.0}, 1.0), 0.0, 10.0, cfg(0.05));
    CHECK(inf_norm(tr.eval(10.0)) == 0.0);
  }
  SUBCASE("first method-of-steps interval closed form") {
    const DenseTrajectory tr = integrate_dde(
        scalar_dde(), HistorySegment::constant({1.0}, 1.0), 0.0, 1.0,
        cfg(0.05));
    const double expected = 0.5 * (1.0 + std::exp(-2.0));
    CHECK(std::abs(tr.eval(1.0)[0] - expected) < 1e-5);
  }
  SUBCASE("step rule clamps to r/20") {
    const DenseTrajectory tr = integrate_dde(
        scalar_dde(), HistorySegment::constant({1.0}, 1.0), 0.0, 1.0,
        cfg(0.5));
    const auto& bp = tr.breakpoints();
    CHECK(bp[1] - bp[0] <= 1.0 / 20.0 + 1e-12);
  }
  SUBCASE("vanishing delay matches the undelayed dynamics") {
    // d(t) = 0 turns scalar_dde into dx/dt = -x.
    const SystemDescriptor sys =
        scalar_dde().with_delays({DelaySignal::constant(0.0, 1.0)});
    const DenseTrajectory tr = integrate_dde(
        sys, HistorySegment::constant({1.0}, 1.0), 0.0, 1.0, cfg(0.05));
    CHECK(tr.eval(1.0)[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-5));
  }
  SUBCASE("r = 0 reduces to the undelayed system") {
    const SystemDescriptor sys = resolve_system("linear", 0.0);
    const DenseTrajectory und =
        integrate_ode(sys, {1.0, 2.0}, 0.0, 5.0, cfg(0.01));
    const DenseTrajectory del = integrate_dde(
        sys, HistorySegment::constant({1.0, 2.0}, 0.0), 0.0, 5.0, cfg(0.01));
    for (double t : {1.0, 3.0, 5.0}) {
      CHECK(std::abs(und.eval(t)[0] - del.eval(t)[0]) < 1e-9);
      CHECK(std::abs(und.eval(t)[1] - del.eval(t)[1]) < 1e-9);
    }
  }
  SUBCASE("history shorter than r is rejected") {
    const SystemDescriptor sys = resolve_system("example15", 1.0);
    CHECK_THROWS_AS(integrate_dde(sys,
                                  HistorySegment::constant({1.0, 1.0}, 0.5),
                                  0.0, 1.0, cfg(0.01)),
                    ConfigError);
  }
  SUBCASE("example15 with sinusoidal delays decays (half-step oracle)") {
    const SystemDescriptor sys = resolve_system("example15", 0.5);
    const HistorySegment h = HistorySegment::constant({1.0, 1.0}, 0.5);
    const DenseTrajectory a = integrate_dde(sys, h, 0.0, 60.0, cfg(0.025));
    const DenseTrajectory b = integrate_dde(sys, h, 0.0, 60.0, cfg(0.0125));
    CHECK(std::abs(a.eval(60.0)[1] - b.eval(60.0)[1]) < 1e-6);
    CHECK(inf_norm(a.eval(60.0)) < 0.05);
    CHECK(inf_norm(a.eval(60.0)) < inf_norm(a.eval(30.0)));
  }
}

TEST_CASE("bounding integration") {
  SUBCASE("zero history stays zero") {
    const SystemDescriptor bnd =
        make_bounding_system(resolve_system("example15", 1.0));
    const DenseTrajectory tr = integrate_bounding(
        bnd, HistorySegment::constant({0.0, 0.0}, 1.0), 0.0, 5.0, cfg(0.05));
    CHECK(inf_norm(tr.eval(5.0)) == 0.0);
  }
  SUBCASE("nonincreasing from a nonpositive-field corner") {
    const SystemDescriptor sys = resolve_system("example15", 0.5);
    const SystemDescriptor bnd = make_bounding_system(sys);
    const DenseTrajectory tr = integrate_bounding(
        bnd, HistorySegment::constant({1.0, 1.0}, 0.5), 0.0, 10.0, cfg(0.02));
    for (std::size_t k = 0; k + 1 < tr.breakpoints().size(); ++k) {
      for (std::size_t i = 0; i < 2; ++i) {
        CHECK(tr.node_value(k + 1, i) <= tr.node_value(k, i) + 1e-8);
      }
    }
  }
  SUBCASE("scalar window-sup run against a fine-step reference") {
    // dx/dt = -2x + max over [t-1, t]; from history 1 the window max stays 1
    // until t = 1, so x(1) = (1 + e^{-2})/2 exactly.
    Field f = [](std::span<const double> x, std::span<double> o) {
      o[0] = -2.0 * x[0];
    };
    Coupling g = [](std::span<const double>, std::span<const Vec> z,
                    std::span<double> o) { o[0] = z[0][0]; };
    const SystemDescriptor sys = SystemDescriptor::make(
        "scalar_wsup", 1, 1.0, std::move(f), std::move(g), {}, Vec{0.0},
        CouplingKind::WindowSup);
    const HistorySegment h = HistorySegment::constant({1.0}, 1.0);
    const DenseTrajectory a = integrate_bounding(sys, h, 0.0, 1.0, cfg(0.05));
    const DenseTrajectory ref =
        integrate_bounding(sys, h, 0.0, 1.0, cfg(0.005));
    CHECK(std::abs(a.eval(1.0)[0] - ref.eval(1.0)[0]) < 1e-5);
    CHECK(a.eval(1.0)[0] ==
          doctest::Approx(0.5 * (1.0 + std::exp(-2.0))).epsilon(1e-5));
  }
}

TEST_CASE("first_crossing") {
  SUBCASE("exponential downward crossing at log 2") {
    const DenseTrajectory tr =
        integrate_ode(scalar_decay(), {1.0}, 0.0, 3.0, cfg(0.01));
    const auto t = first_crossing(
        tr, EventSpec{0, 0.5, EventSpec::Direction::Downward});
    REQUIRE(t.has_value());
    CHECK(std::abs(*t - std::log(2.0)) < 1e-8);
  }
  SUBCASE("constant trajectory never crosses") {
    const DenseTrajectory tr = DenseTrajectory::from_linear(
        {0.0, 1.0, 2.0}, {{1.0}, {1.0}, {1.0}});
    CHECK_FALSE(first_crossing(tr, EventSpec{0, 0.5,
                                             EventSpec::Direction::Downward})
                    .has_value());
    CHECK_FALSE(first_crossing(tr, EventSpec{0, 2.0,
                                             EventSpec::Direction::Upward})
                    .has_value());
  }
  SUBCASE("upward crossing") {
    const DenseTrajectory tr = DenseTrajectory::from_linear(
        {0.0, 1.0}, {{0.0}, {2.0}});
    const auto t =
        first_crossing(tr, EventSpec{0, 1.0, EventSpec::Direction::Upward});
    REQUIRE(t.has_value());
    CHECK(std::abs(*t - 0.5) < 1e-9);
  }
  SUBCASE("example15 reaches x1 <= 1.5 within the analytic bound") {
    const SystemDescriptor sys = resolve_system("example15", 0.5);
    const DenseTrajectory tr = integrate_dde(
        sys, HistorySegment::constant({3.0, 1.0}, 0.5), 0.0, 10.0, cfg(0.02));
    const auto t = first_crossing(
        tr, EventSpec{0, 1.5, EventSpec::Direction::Downward});
    REQUIRE(t.has_value());
    CHECK(*t <= 2.0 * (3.0 - 1.5));
  }
}

TEST_CASE("order preservation quick instance") {
  const SystemDescriptor sys = resolve_system("example15", 0.5);
  const HistorySegment lo = HistorySegment::constant({0.4, 0.3}, 0.5);
  const HistorySegment hi = HistorySegment::from_function(
      2, 0.5, [](double theta) {
        return Vec{0.6 + 0.1 * std::sin(3.0 * theta),
                   0.5 - 0.2 * theta};
      });
  const DenseTrajectory a = integrate_dde(sys, lo, 0.0, 8.0, cfg(0.02));
  const DenseTrajectory b = integrate_dde(sys, hi, 0.0, 8.0, cfg(0.02));
  for (std::size_t k = 0; k < a.breakpoints().size(); ++k) {
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(a.node_value(k, i) <= b.node_value(k, i) + 1e-6);
    }
  }
}

TEST_CASE("step halving shows fourth order") {
  auto endpoint = [&](double h) {
    return integrate_ode(scalar_decay(), {1.0}, 0.0, 1.0, cfg(h)).eval(1.0)[0];
  };
  const double exact = std::exp(-1.0);
  const double e1 = std::abs(endpoint(0.1) - exact);
  const double e2 = std::abs(endpoint(0.05) - exact);
  CHECK(std::log2(e1 / e2) >= 3.5);
}
