#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lgl/error.hpp"
#include "lgl/geodesic_oracle.hpp"
#include "lgl/geodesy.hpp"

using namespace lgl;

TEST_CASE("constant weight chord within the stencil error") {
  const OraclePath o = grid_shortest_path(WeightField::constant(), 256, {-0.9, 0}, {0.9, 0});
  CHECK(std::abs(o.cost - 1.8) <= 0.01 * 1.8);
  CHECK(o.resolution == 256);
  CHECK(distance(o.path.front(), {-0.9, 0}) <= 1.0 / 256);
  CHECK(distance(o.path.back(), {0.9, 0}) <= 1.0 / 256);
}

TEST_CASE("heavy diamond alpha = 2 costs about sqrt5") {
  const OraclePath o = grid_shortest_path(WeightField::heavy_diamond(2.0), 512, {-1, 0}, {1, 0});
  CHECK(std::abs(o.cost - std::sqrt(5.0)) <= 0.015 * std::sqrt(5.0));
}

TEST_CASE("exact edge costs never beat the analytic geodesic") {
  OracleOptions exact;
  exact.rule = EdgeRule::exact;
  for (int res : {64, 128, 256}) {
    const OraclePath o = grid_shortest_path(WeightField::heavy_diamond(2.0), res, {-1, 0}, {1, 0}, exact);
    CHECK(o.cost >= std::sqrt(5.0) - 1e-9);
    const double chord = weighted_length(o.path, WeightField::heavy_diamond(2.0));
    CHECK(o.cost == doctest::Approx(chord).epsilon(1e-12));
  }
  const Point a{-0.7, 0.3}, b{0.6, -0.4};
  const OraclePath c = grid_shortest_path(WeightField::constant(), 128, a, b, exact);
  CHECK(c.cost >= distance(c.path.front(), c.path.back()) - 1e-12);
}

TEST_CASE("lite diamond core corridor converges to 5/8") {
  OracleOptions corridor;
  corridor.mask = [](Point p) { return std::abs(p.y) <= 1e-9; };
  double previous = 1e300;
  for (int res : {64, 128, 256, 512}) {
    const OraclePath o =
        grid_shortest_path(WeightField::lite_dmd_heavy_core(), res, {-0.5, 0}, {0.5, 0}, corridor);
    const double err = std::abs(o.cost - 0.625);
    CHECK(err <= previous + 1e-15);
    previous = err;
  }
  CHECK(previous <= 1e-3);
}

TEST_CASE("refinement is monotone up to noise") {
  const WeightField w = WeightField::lite_dmd_heavy_core();
  double previous = 1e300;
  for (int res : {64, 128, 256, 512}) {
    // Endpoints on every grid, so refinement never moves them.
    const double c = grid_shortest_path(w, res, {-0.875, 0.125}, {0.796875, 0.3125}).cost;
    CHECK(c <= previous * 1.001);
    previous = c;
  }
}

TEST_CASE("sixteen-neighbour stencil beats eight on constant weight") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> r(0.0, 0.95), ang(0.0, 2 * std::numbers::pi);
  OracleOptions eight;
  eight.stencil = Stencil::eight;
  for (int k = 0; k < 20; ++k) {
    const double r1 = r(rng), t1 = ang(rng), r2 = r(rng), t2 = ang(rng);
    const Point a{r1 * std::cos(t1), r1 * std::sin(t1)}, b{r2 * std::cos(t2), r2 * std::sin(t2)};
    const OraclePath o16 = grid_shortest_path(WeightField::constant(), 64, a, b);
    const OraclePath o8 = grid_shortest_path(WeightField::constant(), 64, a, b, eight);
    // Both snap to the same nodes, so the exact distance is between them.
    const double d = distance(o16.path.front(), o16.path.back());
    CHECK(o16.cost - d <= o8.cost - d + 1e-12);
  }
}

TEST_CASE("refine_until") {
  SUBCASE("constant weight converges by 512") {
    const RefineResult r = refine_until(WeightField::constant(), {-0.8, -0.2}, {0.7, 0.4}, 0.005);
    CHECK(r.converged);
    CHECK(r.resolution <= 512);
    CHECK(r.achieved_tol < 0.005);
  }
  SUBCASE("heavy disk hugs the boundary arc") {
    // Two tangents of length sqrt(3)/2 plus the arc of angle pi/3 on the
    // radius 1/2 circle, which carries the outer weight 1. The tangents run
    // at 30 degrees, between stencil directions, so the grid keeps about 1%.
    const double analytic = 2.0 * std::sqrt(0.75) + std::numbers::pi / 6.0;
    const RefineResult r = refine_until(WeightField::heavy_disk(2.0), {-1, 0}, {1, 0}, 0.002);
    CHECK(std::abs(r.cost - analytic) <= 0.015 * analytic);
    CHECK(r.cost >= analytic - 1e-3);
  }
  CHECK_THROWS_AS((void)refine_until(WeightField::constant(), {-0.5, 0}, {0.5, 0}, 0.001), std::invalid_argument);
}

TEST_CASE("tight light diamond ray agrees with the oracle") {
  const WeightField w = WeightField::light_diamond_tight(0.5);
  const LayeredMedium m = layered_medium_of(w, 4096);
  for (double t0 : {0.25, 0.5}) {
    const TraceResult ray = trace_layered_ray_dir(m, {t0, 0.0}, {1.0, 0.0}, stop_at_l1_level(1.0));
    const Point end = ray.path.back();
    CHECK(end.y == doctest::Approx(H_of(t0)).epsilon(0.02));
    const double ray_cost = weighted_length(ray.path, w, 1e-3);
    const RefineResult o = refine_until(w, {t0, 0.0}, end, 0.002);
    INFO("t0 = " << t0);
    CHECK(std::abs(o.cost - ray_cost) <= 0.02 * ray_cost);
  }
}

TEST_CASE("endpoint validation") {
  CHECK_THROWS_AS((void)grid_shortest_path(WeightField::constant(), 64, {1.5, 0}, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS((void)grid_shortest_path(WeightField::constant(), 16, {0.5, 0}, {0, 0}), std::invalid_argument);
  OracleOptions cut;
  cut.mask = [](Point p) { return std::abs(p.x) > 0.1; };
  CHECK_THROWS_AS((void)grid_shortest_path(WeightField::constant(), 64, {-0.5, 0}, {0.5, 0}, cut), SolverError);
}

TEST_CASE("deterministic") {
  const WeightField w = WeightField::three_heavy_diamonds();
  const OraclePath a = grid_shortest_path(w, 128, {-0.9, 0.1}, {0.9, 0.1});
  const OraclePath b = grid_shortest_path(w, 128, {-0.9, 0.1}, {0.9, 0.1});
  CHECK(a.cost == b.cost);
  REQUIRE(a.path.size() == b.path.size());
  for (std::size_t i = 0; i < a.path.size(); ++i) CHECK(a.path[i] == b.path[i]);
}
