#include <doctest.h>

#include <cmath>
#include <fstream>

#include "monocert/catalog.hpp"
#include "monocert/system.hpp"
#include "monocert/validators.hpp"
#include "monocert/vec.hpp"

using namespace monocert;

TEST_CASE("example15 undelayed field values") {
  const SystemDescriptor sys = resolve_system("example15");
  const Vec at0 = eval_undelayed_field(sys, {0.0, 0.0});
  CHECK(at0[0] == 0.0);
  CHECK(at0[1] == 0.0);

  const Vec at11 = eval_undelayed_field(sys, {1.0, 1.0});
  CHECK(at11[0] == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(at11[1] == doctest::Approx(0.0).epsilon(1e-15));

  const Vec at22 = eval_undelayed_field(sys, {2.0, 2.0});
  CHECK(at22[0] == doctest::Approx(-1.2).epsilon(1e-12));
  CHECK(at22[1] == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("linear catalog is (A+B)v on constant arguments") {
  const SystemDescriptor sys = resolve_system("linear");
  const Vec v = eval_undelayed_field(sys, {1.0, 1.0});
  CHECK(v[0] == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(v[1] == doctest::Approx(-0.5).epsilon(1e-15));
  const Vec w = eval_undelayed_field(sys, {2.0, 0.0});
  CHECK(w[0] == doctest::Approx(-4.0 + 1.0).epsilon(1e-15));
  CHECK(w[1] == doctest::Approx(1.0 + 1.0).epsilon(1e-15));
}

TEST_CASE("delayed field evaluation") {
  SystemDescriptor sys = resolve_system("example15", 1.0);

  SUBCASE("constant history matches the undelayed field") {
    const HistorySegment h = HistorySegment::constant({0.7, 1.3}, 1.0);
    const Vec del = eval_delayed_field(sys, 3.21, h);
    const Vec und = eval_undelayed_field(sys, {0.7, 1.3});
    CHECK(del[0] == und[0]);
    CHECK(del[1] == und[1]);
  }

  SUBCASE("distinct delayed samples") {
    // First delay looks a full window back, second at the current time.
    sys = sys.with_delays({DelaySignal::constant(1.0, 1.0),
                           DelaySignal::constant(0.0, 1.0)});
    const HistorySegment h = HistorySegment::from_function(
        2, 1.0, [](double theta) { return Vec{1.0 - theta, 1.0 - theta}; });
    const Vec del = eval_delayed_field(sys, 0.0, h);
    CHECK(del[0] == doctest::Approx(-0.2).epsilon(1e-12));
    CHECK(del[1] == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("zero history") {
    const HistorySegment h = HistorySegment::constant({0.0, 0.0}, 1.0);
    const Vec del = eval_delayed_field(sys, 1.0, h);
    CHECK(del[0] == 0.0);
    CHECK(del[1] == 0.0);
  }
}

TEST_CASE("descriptor validation") {
  CHECK_THROWS_AS(
      SystemDescriptor::make(
          "bad", 1, 1.0,
          [](std::span<const double> x, std::span<double> o) { o[0] = 1.0 - x[0]; },
          [](std::span<const double>, std::span<const Vec>, std::span<double> o) {
            o[0] = 0.0;
          },
          {}, Vec{0.0}),
      ConfigError);  // equilibrium inconsistent

  // Delay signal bound exceeding the system r.
  const SystemDescriptor lin = resolve_system("linear");
  CHECK_THROWS_AS(lin.with_delays({DelaySignal::constant(2.0, 2.0)}),
                  ConfigError);
}

TEST_CASE("quasimonotonicity validator") {
  SUBCASE("example15 passes at 10^4 trials") {
    const SystemDescriptor sys = resolve_system("example15");
    const Box dom({0.0, 0.0}, {5.0, 5.0});
    const MonotonicityReport rep = check_quasimonotonicity(sys, 10000, dom, 1);
    CHECK(rep.passed());
    CHECK(rep.trials == 10000);
  }
  SUBCASE("planted fixture is flagged with a witness") {
    const SystemDescriptor fix = resolve_system("nonmonotone_fixture");
    // The defining counterexample by hand: x=(0,0) <= y=(0,1), pinned i=1.
    Vec f_at_x(2), f_at_y(2);
    fix.f(Vec{0.0, 0.0}, f_at_x);
    fix.f(Vec{0.0, 1.0}, f_at_y);
    CHECK(f_at_x[0] == 0.0);
    CHECK(f_at_y[0] == -1.0);
    CHECK(f_at_x[0] > f_at_y[0]);

    const Box dom({0.0, 0.0}, {5.0, 5.0});
    const MonotonicityReport rep = check_quasimonotonicity(fix, 2000, dom, 1);
    CHECK_FALSE(rep.passed());
    CHECK(rep.violations.front().component >= 1);
  }
  SUBCASE("linear catalog passes") {
    const SystemDescriptor sys = resolve_system("linear");
    const Box dom({-3.0, -3.0}, {3.0, 3.0});
    CHECK(check_quasimonotonicity(sys, 10000, dom, 2).passed());
  }
  SUBCASE("deterministic given the seed") {
    const SystemDescriptor fix = resolve_system("nonmonotone_fixture");
    const Box dom({0.0, 0.0}, {5.0, 5.0});
    const MonotonicityReport a = check_quasimonotonicity(fix, 500, dom, 42);
    const MonotonicityReport b = check_quasimonotonicity(fix, 500, dom, 42);
    REQUIRE_FALSE(a.passed());
    CHECK(a.violations.size() == b.violations.size());
    CHECK(a.violations.front().trial == b.violations.front().trial);
  }
}

TEST_CASE("subhomogeneity validator") {
  const Box dom({0.0, 0.0}, {5.0, 5.0});
  SUBCASE("linear is subhomogeneous of degree 1") {
    CHECK(check_subhomogeneity(resolve_system("linear"), 1.0, 2000, dom, 3)
              .passed());
  }
  SUBCASE("example15 is flagged") {
    const SubhomogeneityReport rep =
        check_subhomogeneity(resolve_system("example15"), 1.0, 2000, dom, 3);
    CHECK_FALSE(rep.passed());
    CHECK(rep.violations.front().lambda >= 1.0);
  }
  SUBCASE("scalar -x^2 is subhomogeneous of degree 2 in f") {
    Field f = [](std::span<const double> x, std::span<double> o) {
      o[0] = -x[0] * x[0];
    };
    Coupling g = [](std::span<const double>, std::span<const Vec>,
                    std::span<double> o) { o[0] = 0.0; };
    const SystemDescriptor sys = SystemDescriptor::make(
        "neg_square", 1, 0.0, std::move(f), std::move(g), {}, Vec{0.0});
    const Box dom1({0.0}, {10.0});
    CHECK(check_subhomogeneity(sys, 2.0, 2000, dom1, 4).passed());
  }
}

TEST_CASE("shift_to_origin") {
  SUBCASE("identity when the equilibrium is already zero") {
    const SystemDescriptor sys = resolve_system("linear");
    const SystemDescriptor sh = shift_to_origin(sys, ShiftDirection::Above);
    for (double a : {0.3, 1.7}) {
      const Vec u = eval_undelayed_field(sys, {a, 2 * a});
      const Vec v = eval_undelayed_field(sh, {a, 2 * a});
      CHECK(u[0] == doctest::Approx(v[0]).epsilon(1e-15));
      CHECK(u[1] == doctest::Approx(v[1]).epsilon(1e-15));
    }
  }
  SUBCASE("scalar shifted system becomes du = -2u + u_d") {
    const SystemDescriptor sys = resolve_system("scalar_shifted");
    for (ShiftDirection dir : {ShiftDirection::Above, ShiftDirection::Below}) {
      const SystemDescriptor sh = shift_to_origin(sys, dir);
      CHECK(inf_norm(eval_undelayed_field(sh, {0.0})) <= kOrderEps);
      // Head 0.3, delayed sample 0.7: expect -2(0.3) + 0.7 = 0.1.
      Vec fpart(1), gpart(1);
      sh.f(Vec{0.3}, fpart);
      std::vector<Vec> samples{Vec{0.7}};
      sh.g(Vec{0.3}, samples, gpart);
      CHECK(fpart[0] + gpart[0] == doctest::Approx(0.1).epsilon(1e-12));
    }
  }
  SUBCASE("missing equilibrium info") {
    SystemDescriptor sys = resolve_system("linear");
    sys.equilibrium.clear();
    CHECK_THROWS_AS(shift_to_origin(sys, ShiftDirection::Above), ConfigError);
  }
}

TEST_CASE("bounding system") {
  const SystemDescriptor sys = resolve_system("example15", 1.0);
  const SystemDescriptor bnd = make_bounding_system(sys);

  SUBCASE("constant history reduces to the undelayed field") {
    const HistorySegment h = HistorySegment::constant({0.9, 1.4}, 1.0);
    const Vec a = eval_delayed_field(bnd, 0.0, h);
    const Vec b = eval_undelayed_field(sys, {0.9, 1.4});
    CHECK(a[0] == doctest::Approx(b[0]).epsilon(1e-15));
    CHECK(a[1] == doctest::Approx(b[1]).epsilon(1e-15));
  }
  SUBCASE("window max of x2 = 2 with head (1,1)") {
    const HistorySegment h = HistorySegment::from_function(
        2, 1.0, [](double theta) { return Vec{1.0, 1.0 - theta}; });
    const Vec a = eval_delayed_field(bnd, 0.0, h);
    CHECK(a[0] == doctest::Approx(-1.0 + 4.0 / 5.0).epsilon(1e-9));
  }
  SUBCASE("decreasing history uses the oldest values") {
    const HistorySegment h = HistorySegment::from_function(
        2, 1.0,
        [](double theta) { return Vec{1.0 - theta, 1.0 - theta}; });
    const Vec sup = window_sup(h);
    CHECK(sup[0] == doctest::Approx(2.0).epsilon(1e-9));
    const Vec a = eval_delayed_field(bnd, 0.0, h);
    const double sat2 = 4.0 / 5.0;
    CHECK(a[0] == doctest::Approx(-1.0 + sat2).epsilon(1e-9));  // f1 at head
    CHECK(a[1] == doctest::Approx(2.0 - 1.0).epsilon(1e-9));
  }
  SUBCASE("bounding dominates the delayed field") {
    const HistorySegment h = HistorySegment::from_function(
        2, 1.0, [](double theta) {
          return Vec{1.0 + 0.5 * std::sin(5.0 * theta),
                     1.2 + 0.7 * std::sin(3.0 * theta + 1.0)};
        });
    for (double t : {0.0, 0.7, 2.3, 11.0}) {
      const Vec del = eval_delayed_field(sys, t, h);
      const Vec up = eval_delayed_field(bnd, 0.0, h);
      CHECK(del[0] <= up[0] + 1e-9);
      CHECK(del[1] <= up[1] + 1e-9);
    }
  }
}

TEST_CASE("constant-argument time invariance on the catalog") {
  for (const CatalogEntry& e : catalog()) {
    if (e.fixture) continue;
    const SystemDescriptor sys = e.build(e.default_r);
    for (double a : {0.2, 0.9, 2.4}) {
      const Vec v(sys.n, a);
      const Vec und = eval_undelayed_field(sys, v);
      for (double t : {0.0, 1.3, 7.7, 42.0}) {
        const Vec del =
            eval_delayed_field(sys, t, HistorySegment::constant(v, sys.r));
        for (std::size_t i = 0; i < sys.n; ++i) CHECK(del[i] == und[i]);
      }
    }
  }
}

TEST_CASE("system file loading") {
  const std::string path = "test_system_file.json";
  {
    std::ofstream f(path);
    f << R"json({
      "name": "file_sys",
      "dimension": 2,
      "r": 0.5,
      "f": ["-x1 + x2^2/(x2^2+1)", "-2*x2^2/(x2^2+1)"],
      "g": ["0", "z1"],
      "delays": [{"kind": "constant", "value": 0.25}],
      "equilibrium": [0, 0]
    })json";
  }
  const SystemDescriptor sys = load_system_file(path);
  CHECK(sys.n == 2);
  CHECK(sys.r == 0.5);
  const Vec at11 = eval_undelayed_field(sys, {1.0, 1.0});
  CHECK(at11[0] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(at11[1] == doctest::Approx(0.0).epsilon(1e-12));

  SUBCASE("z reference without delays is rejected") {
    std::ofstream f(path);
    f << R"({"dimension": 1, "r": 0, "f": ["-x1"], "g": ["z1"]})";
    f.close();
    CHECK_THROWS_AS(load_system_file(path), ConfigError);
  }
  SUBCASE("missing keys are rejected") {
    std::ofstream f(path);
    f << R"({"dimension": 1})";
    f.close();
    CHECK_THROWS_AS(load_system_file(path), ConfigError);
  }
}

TEST_CASE("delay signals stay inside [0, r]") {
  const DelaySignal s = DelaySignal::sinusoidal(0.5, 0.5, 2.0, 0.3, 1.0);
  const DelaySignal p = DelaySignal::piecewise_random(7, 0.25, 1.0);
  for (int j = 0; j <= 1000; ++j) {
    const double t = 20.0 * j / 1000.0;
    CHECK(s.eval(t) >= 0.0);
    CHECK(s.eval(t) <= 1.0);
    CHECK(p.eval(t) >= 0.0);
    CHECK(p.eval(t) <= 1.0);
  }
  CHECK(p.eval(0.1) == p.eval(0.2));  // same switch cell
  CHECK_THROWS_AS(DelaySignal::constant(2.0, 1.0), ConfigError);
  CHECK_THROWS_AS(DelaySignal::sinusoidal(0.8, 0.5, 1.0, 0.0, 1.0), ConfigError);
}
