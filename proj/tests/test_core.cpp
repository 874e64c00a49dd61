#include <doctest.h>

#include <cmath>
#include <limits>

#include "monocert/history.hpp"
#include "monocert/trajectory.hpp"
#include "monocert/vec.hpp"

using namespace monocert;

TEST_CASE("cmp_leq basics") {
  CHECK(cmp_leq({0.0, 0.0}, {0.0, 0.0}));
  CHECK_FALSE(cmp_leq({1.0, 2.0}, {2.0, 1.0}));
  CHECK(cmp_leq({1.0, 1.0}, {1.0 + 1e-12, 1.0}));
  CHECK(cmp_leq({1.0 + 1e-12, 1.0}, {1.0, 1.0}));  // inside the tolerance
  CHECK_THROWS_AS(cmp_leq({1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("cmp_ll margin semantics") {
  CHECK(cmp_ll({0.5, 0.5}, {1.0, 1.0}, 0.01));
  CHECK_FALSE(cmp_ll({1.0, 0.5}, {1.0, 1.0}, 0.01));
  CHECK_FALSE(cmp_ll({0.99, 0.99}, {1.0, 1.0}, 0.05));
  CHECK(cmp_ll({0.94, 0.94}, {1.0, 1.0}, 0.05));
  CHECK_THROWS_AS(cmp_ll({0.0}, {1.0, 1.0}, 0.01), std::invalid_argument);
}

TEST_CASE("strict order implies weak order") {
  CHECK(cmp_ll({0.5, 0.2}, {1.0, 1.0}, 0.01));
  CHECK(cmp_leq({0.5, 0.2}, {1.0, 1.0}));
}

TEST_CASE("non-finite inputs are rejected") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(cmp_leq({nan}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(cmp_ll({1.0}, {inf}, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(Box({0.0, nan}, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(HistorySegment::constant({inf}, 1.0), std::invalid_argument);
}

TEST_CASE("Box ordering invariant") {
  CHECK_THROWS_AS(Box({1.0}, {0.0}), std::invalid_argument);
  const Box b({0.0, 0.0}, {1.0, 2.0});
  CHECK(b.contains({0.5, 1.5}));
  CHECK_FALSE(b.contains({0.5, 2.5}));
}

namespace {

DenseTrajectory exp_trajectory(double h, double t_end) {
  std::vector<double> times;
  std::vector<Vec> values, derivs;
  for (double t = 0.0; t <= t_end + 1e-12; t += h) {
    times.push_back(t);
    values.push_back({std::exp(-t)});
    derivs.push_back({-std::exp(-t)});
  }
  return DenseTrajectory::from_nodes(times, values, derivs);
}

const std::vector<double> kGridTimes = {0.0, 1.0, 2.0, 3.0, 4.0};
const std::vector<Vec> kGridValues = {{1.0}, {0.6}, {0.8}, {0.3}, {0.1}};

}  // namespace

TEST_CASE("dense trajectory eval") {
  const DenseTrajectory tr = exp_trajectory(0.1, 2.0);

  SUBCASE("exact at breakpoints") {
    const double t5 = tr.breakpoints()[5];
    CHECK(tr.eval(t5)[0] == tr.node_value(5, 0));
    CHECK(tr.eval(0.0)[0] == 1.0);
  }
  SUBCASE("interpolation error of a smooth function is tiny") {
    CHECK(tr.eval(1.0)[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
    CHECK(tr.eval(0.123)[0] == doctest::Approx(std::exp(-0.123)).epsilon(1e-7));
  }
  SUBCASE("out of domain throws") {
    CHECK_THROWS_AS(tr.eval(-0.5), std::out_of_range);
    CHECK_THROWS_AS(tr.eval(2.5), std::out_of_range);
  }
  SUBCASE("junction continuity") {
    for (std::size_t k = 1; k + 1 < tr.breakpoints().size(); ++k) {
      const double t = tr.breakpoints()[k];
      const double left = tr.segment_cubic(0, k - 1).eval(1.0);
      const double right = tr.segment_cubic(0, k).eval(0.0);
      CHECK(std::abs(left - right) <= 1e-12 * std::max(1.0, std::abs(right)));
      CHECK(tr.eval(t)[0] == right);
    }
  }
}

TEST_CASE("linear segment midpoint") {
  const DenseTrajectory tr =
      DenseTrajectory::from_linear({0.0, 1.0}, {{1.0}, {0.6}});
  CHECK(tr.eval(0.5)[0] == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("running_min on the fixture grid") {
  const DenseTrajectory tr = DenseTrajectory::from_linear(kGridTimes, kGridValues);

  // Brute-force oracle on a fine grid.
  auto brute = [&](double t) {
    double m = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= 100000; ++j) {
      const double s = t * j / 100000.0;
      m = std::min(m, tr.eval_component(0, s));
    }
    return m;
  };
  CHECK(running_min(tr, 0, 2.0) == doctest::Approx(brute(2.0)).epsilon(1e-12));
  CHECK(running_min(tr, 0, 2.0) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(running_min(tr, 0, 3.0) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK_THROWS_AS(running_min(tr, 0, 5.0), std::out_of_range);
}

TEST_CASE("running_min is the trajectory on a monotone run") {
  const DenseTrajectory tr = exp_trajectory(0.05, 3.0);
  for (double t : {0.3, 1.1, 2.7}) {
    CHECK(running_min(tr, 0, t) ==
          doctest::Approx(tr.eval_component(0, t)).epsilon(1e-12));
  }
}

TEST_CASE("running_min sees interior segment extrema") {
  // One segment dipping below both endpoints.
  const DenseTrajectory tr = DenseTrajectory::from_nodes(
      {0.0, 1.0}, {{0.0}, {0.0}}, {{-1.0}, {1.0}});
  double brute = std::numeric_limits<double>::infinity();
  for (int j = 0; j <= 100000; ++j) {
    brute = std::min(brute, tr.eval_component(0, j / 100000.0));
  }
  CHECK(running_min(tr, 0, 1.0) == doctest::Approx(brute).epsilon(1e-10));
  CHECK(running_min(tr, 0, 1.0) < -0.1);
}

TEST_CASE("window_sup") {
  SUBCASE("constant history") {
    const HistorySegment h = HistorySegment::constant({2.0, -1.0}, 1.5);
    const Vec s = window_sup(h);
    CHECK(s[0] == 2.0);
    CHECK(s[1] == -1.0);
  }
  SUBCASE("endpoint maximum of |theta|") {
    const HistorySegment h = HistorySegment::from_function(
        1, 1.0, [](double theta) { return Vec{std::abs(theta)}; });
    CHECK(window_sup(h)[0] == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("interior extremum of -theta(theta+1)") {
    const HistorySegment h = HistorySegment::from_function(
        1, 1.0, [](double theta) { return Vec{-theta * (theta + 1.0)}; });
    CHECK(window_sup(h)[0] == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("trajectory slice uses analytic extrema") {
    const DenseTrajectory tr =
        DenseTrajectory::from_linear(kGridTimes, kGridValues);
    auto ptr = std::make_shared<DenseTrajectory>(tr);
    const HistorySegment h = HistorySegment::from_trajectory(ptr, 4.0, 4.0);
    CHECK(window_sup(h)[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(h.sup_over(-2.0, 0.0)[0] == doctest::Approx(0.8).epsilon(1e-12));
  }
  SUBCASE("domination over samples") {
    const HistorySegment h = HistorySegment::from_function(
        1, 2.0, [](double theta) { return Vec{std::sin(3.0 * theta)}; });
    const double s = window_sup(h)[0];
    double best = -2.0;
    for (int j = 0; j <= 512; ++j) {
      const double theta = -2.0 + 2.0 * j / 512.0;
      const double v = h.eval(theta)[0];
      CHECK(v <= s + 1e-9);
      best = std::max(best, v);
    }
    CHECK(best >= s - 1e-4);
  }
}

TEST_CASE("history evaluation") {
  const HistorySegment h = HistorySegment::constant({1.0, 2.0}, 1.0);
  CHECK(h.eval(-0.5)[1] == 2.0);
  CHECK_THROWS_AS(h.eval(-2.0), std::out_of_range);
  CHECK_THROWS_AS(h.eval(0.5), std::out_of_range);
}

TEST_CASE("trajectory concat") {
  const DenseTrajectory a =
      DenseTrajectory::from_linear({-1.0, 0.0}, {{2.0}, {1.0}});
  const DenseTrajectory b =
      DenseTrajectory::from_linear({0.0, 1.0}, {{1.0}, {0.5}});
  const DenseTrajectory c = DenseTrajectory::concat(a, b);
  CHECK(c.t_begin() == -1.0);
  CHECK(c.t_end() == 1.0);
  CHECK(c.eval(-0.5)[0] == doctest::Approx(1.5));
  CHECK(c.eval(0.5)[0] == doctest::Approx(0.75));
  const DenseTrajectory bad =
      DenseTrajectory::from_linear({0.5, 1.0}, {{1.0}, {0.5}});
  CHECK_THROWS_AS(DenseTrajectory::concat(a, bad), std::invalid_argument);
}
