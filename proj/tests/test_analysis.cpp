#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lgl/analysis.hpp"
#include "lgl/error.hpp"

using namespace lgl;

namespace {

double euclid(std::initializer_list<Point> pts) {
  double s = 0;
  const Point* prev = nullptr;
  for (const Point& p : pts) {
    if (prev) s += distance(*prev, p);
    prev = &p;
  }
  return s;
}

// Both tip paths of the three-diamond weight touch the heavy regions only
// at tips, so the tie point is a purely Euclidean condition.
double euclid_t0() {
  auto diff = [](double t) {
    const double y = t - 1, x = std::sqrt(1 - y * y);
    const Point l{-x, y}, r{x, y};
    return euclid({l, {-0.5, -0.25}, {0.5, -0.25}, r}) - euclid({l, {-0.5, 0.25}, {0, 0.375}, {0.5, 0.25}, r});
  };
  double lo = 0.75, hi = 1.375;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (diff(mid) < 0) == (diff(lo) < 0) ? lo = mid : hi = mid;
  }
  return 0.5 * (lo + hi);
}

// The left boundary point on the line through (-1/2, 1/4) and (0, 3/8):
// 68 x^2 + 12 x - 55 = 0.
double closed_t1() {
  const double x = (-12.0 - std::sqrt(144.0 + 4.0 * 68.0 * 55.0)) / 136.0;
  return 1.0 + 0.375 + x / 4.0;
}

RasterSet box(int res, int i0, int j0, int i1, int j1) {
  RasterSet s(res);
  for (int j = j0; j < j1; ++j) {
    for (int i = i0; i < i1; ++i) s.at(i, j) = 1;
  }
  return s;
}

}  // namespace

TEST_CASE("quantities and reports") {
  ExperimentReport r{"demo", {}, {}};
  CHECK(r.add("a", 1.0, 1.05, 0.1).pass);
  CHECK_FALSE(r.add("b", 1.0, 1.2, 0.1).pass);
  CHECK(r.add("c", 1.0, 1.05, 0.05, Check::rel).pass);
  CHECK(r.add("d", 2.0, 1.0, 0.0, Check::at_least).pass);
  CHECK_FALSE(r.add("e", 2.0, 1.0, 0.5, Check::at_most).pass);
  CHECK_FALSE(r.all_pass());
  CHECK(r.failing() == std::vector<std::string>{"b", "e"});
  for (const Quantity& q : r.quantities) CHECK(q.evaluate() == q.pass);
  CHECK(to_string(Check::at_least) == ">=");
}

TEST_CASE("clearance of the flat disk is r^2 / 2") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi), rad(0.05, 0.9);
  for (int k = 0; k < 8; ++k) {
    const double a = ang(rng), r = rad(rng);
    const double c = curvature_clearance(WeightField::constant(), {std::cos(a), std::sin(a)}, r);
    CHECK(c == doctest::Approx(r * r / 2).epsilon(1e-6));
  }
  CHECK_THROWS_AS((void)curvature_clearance(WeightField::constant(), {0.5, 0}, 0.3), std::invalid_argument);
  CHECK_THROWS_AS((void)curvature_clearance(WeightField::constant(), {1, 0}, 2.0), std::invalid_argument);
  CHECK(curvature_clearance(WeightField::light_diamond_tight(0.5), {0, -1}, 0.5) > 0.0);
  CHECK(curvature_clearance(WeightField::heavy_disk(2.0), {0, 1}, 0.8) > 0.0);
}

TEST_CASE("raster perimeter") {
  const PerimeterWeights unit(WeightField::constant(), 16);
  const double s = 2.0 / 16;
  CHECK(discrete_perimeter(box(16, 2, 3, 7, 5), unit) == doctest::Approx(2 * (5 + 2) * s).epsilon(1e-14));
  // A box touching the raster edge loses those sides.
  CHECK(discrete_perimeter(box(16, 0, 0, 4, 16), unit) == doctest::Approx(16 * s).epsilon(1e-14));
  const RasterSet a = box(16, 0, 0, 8, 8), b = box(16, 4, 4, 12, 12);
  const RasterSet i = set_intersection(a, b), u = set_union(a, b);
  int ni = 0, nu = 0;
  for (unsigned char c : i.cells) ni += c;
  for (unsigned char c : u.cells) nu += c;
  CHECK(ni == 16);
  CHECK(nu == 64 + 64 - 16);
  const double pa = discrete_perimeter(a, unit), pb = discrete_perimeter(b, unit);
  CHECK(discrete_perimeter(i, unit) + discrete_perimeter(u, unit) <= pa + pb + 1e-12);
  const PerimeterWeights heavy(WeightField::constant(3.0), 16);
  CHECK(discrete_perimeter(b, heavy) == doctest::Approx(3 * pb).epsilon(1e-14));
}

TEST_CASE("submodularity") {
  const SubmodularityResult c = submodularity_check(128, 100, 5);
  CHECK(c.trials == 100);
  CHECK(c.passed == 100);
  const SubmodularityResult h = submodularity_check(128, 40, 6, WeightField::heavy_disk(2.0));
  CHECK(h.passed == 40);
  const kernels::PairScan p = rectangle_pairs16();
  CHECK(p.pairs == 18496ull * 18497ull / 2ull);
  CHECK(p.violations == 0u);
}

TEST_CASE("three diamond thresholds") {
  const double t0 = euclid_t0(), t1 = closed_t1();
  for (double alpha : {std::sqrt(2.0), 2.0, 5.0}) {
    const DiamondThresholds th = three_diamonds_thresholds(alpha);
    INFO("alpha = " << alpha);
    CHECK(std::abs(th.t0 - t0) <= 1e-7);
    CHECK(std::abs(th.t1 - t1) <= 1e-7);
    CHECK(std::abs(th.t0 - 1.017) <= 0.005);
    CHECK(std::abs(th.t1 - 1.127) <= 0.005);
  }
  CHECK_THROWS_AS((void)three_diamonds_thresholds(1.2), std::invalid_argument);
}

TEST_CASE("stack comparison") {
  StackOptions o;
  o.resolution = 128;
  const WeightField w = WeightField::lite_dmd_heavy_core();
  const SolutionStack a = stack(w, uniform_levels(64), BranchPolicy::all_minimal(), o);
  const Nonuniqueness same = compare_stacks(a, a);
  CHECK(same.area == 0.0);
  CHECK(same.energies_match);
  const SolutionStack b = stack(w, uniform_levels(64), BranchPolicy::all_maximal(), o);
  const Nonuniqueness diff = compare_stacks(a, b);
  CHECK(diff.area > 0.0);
  CHECK(diff.energy_rel_gap <= 0.005);
  CHECK_THROWS_AS((void)nonuniqueness_gap(w, BranchPolicy{}, BranchPolicy{}), std::invalid_argument);
}

TEST_CASE("convex combinations of the two three-diamond solutions") {
  StackOptions o;
  o.resolution = 128;
  const WeightField w = WeightField::three_heavy_diamonds(std::sqrt(2.0));
  const SolutionStack a = stack(w, uniform_levels(101), BranchPolicy{0.0}, o);
  const SolutionStack b = stack(w, uniform_levels(101), BranchPolicy{2.0}, o);
  const GridField fa = fill_field(a.curves(), 128, Reconstruction::bridged);
  const GridField fb = fill_field(b.curves(), 128, Reconstruction::bridged);
  const double ta = discrete_tv(fa, w), tb = discrete_tv(fb, w);
  for (double lambda : {0.0, 0.25, 0.5, 1.0}) {
    const GridField mix = convex_combination(fa, fb, lambda);
    const double tv = discrete_tv(mix, w);
    INFO("lambda = " << lambda << " tv " << tv << " ends " << ta << " " << tb);
    // Total variation is convex; equality up to discretization marks a minimizer.
    CHECK(tv <= lambda * ta + (1 - lambda) * tb + 1e-9);
    CHECK(tv >= (lambda * ta + (1 - lambda) * tb) * (1 - 0.005));
  }
  CHECK(convex_combination(fa, fb, 1.0).samples == fa.samples);
  CHECK_THROWS_AS((void)convex_combination(fa, fb, 1.5), std::invalid_argument);
  CHECK_THROWS_AS((void)convex_combination(fa, GridField(64), 0.5), std::invalid_argument);
}

TEST_CASE("lite diamond core probes") {
  CHECK(ldhc_probe_length(0.5, 0.0, 0.0) == doctest::Approx(0.3125).epsilon(1e-12));
  CHECK(ldhc_probe_length(0.5, 0.2, std::atan(0.4)) == doctest::Approx(0.575 * std::sqrt(1.16) / 2).epsilon(1e-12));
  const ExperimentReport r = litedmdheavycore_checks();
  for (const Quantity& q : r.quantities) {
    INFO(q.label << " value " << q.value);
    CHECK(q.pass);
  }
}

TEST_CASE("suites") {
  CHECK(suite_names() == std::vector<std::string>{"clearance", "ldhc", "snell", "submodularity", "thresholds"});
  for (const char* name : {"snell", "thresholds", "clearance", "ldhc"}) {
    const ExperimentReport r = run_suite(name, 1);
    INFO(name);
    CHECK(r.all_pass());
    CHECK_FALSE(r.quantities.empty());
  }
  CHECK_THROWS_AS((void)run_suite("bogus", 1), ConfigError);
}
