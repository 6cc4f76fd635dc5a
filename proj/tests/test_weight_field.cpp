#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lgl/error.hpp"
#include "lgl/weight_field.hpp"

using namespace lgl;

namespace {

// Independent quadrature: plain midpoint rule with many cells.
double brute_integral(const WeightField& w, Point a, Point b, int cells = 400000) {
  double s = 0.0;
  for (int k = 0; k < cells; ++k) {
    const double t = (k + 0.5) / cells;
    s += w.eval(a + t * (b - a));
  }
  return s * distance(a, b) / cells;
}

std::vector<WeightField> catalog_defaults() {
  return {WeightField::constant(),          WeightField::heavy_diamond(),   WeightField::heavy_disk(),
          WeightField::light_diamond(),     WeightField::light_diamond_tight(), WeightField::three_heavy_diamonds(),
          WeightField::lite_dmd_heavy_core()};
}

}  // namespace

TEST_CASE("pointwise values from the closed forms") {
  CHECK(WeightField::constant().eval({0.3, 0.7}) == 1.0);
  CHECK(WeightField::light_diamond_tight(0.5).eval({0, 0}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(WeightField::lite_dmd_heavy_core().eval({0.25, 0.25}) == doctest::Approx(0.5).epsilon(1e-15));
  // light_diamond_tight: alpha + (1 - alpha)|p|_1 inside, 1 outside.
  const WeightField ldt = WeightField::light_diamond_tight(0.3);
  CHECK(ldt.eval({0.2, -0.3}) == doctest::Approx(0.3 + 0.7 * 0.5).epsilon(1e-15));
  CHECK(ldt.eval({0.9, 0.9}) == 1.0);
  // lite_dmd_heavy_core on each side of both interfaces.
  const WeightField ldhc = WeightField::lite_dmd_heavy_core();
  CHECK(ldhc.eval({0.1, 0.1}) == doctest::Approx(0.75 - 0.5 * 0.2).epsilon(1e-15));
  CHECK(ldhc.eval({0.6, 0.3}) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(ldhc.eval({0.9, 0.9}) == 1.0);
  CHECK(WeightField::heavy_diamond(2.0).eval({0.1, 0.1}) == 2.0);
  CHECK(WeightField::heavy_disk(2.0).eval({0.3, 0.3}) == 2.0);
  CHECK(WeightField::heavy_disk(2.0).eval({0.4, 0.4}) == 1.0);
}

TEST_CASE("interfaces take the smaller one-sided limit") {
  CHECK(WeightField::heavy_diamond(2.0).eval({0.5, 0.0}) == 1.0);
  CHECK(WeightField::heavy_diamond(2.0).eval({0.25, 0.25}) == 1.0);
  CHECK(WeightField::heavy_disk(2.0).eval({0.0, 0.5}) == 1.0);
  CHECK(WeightField::three_heavy_diamonds().eval({0.0, 0.375}) == 1.0);
  const WeightField layered = WeightField::layered_horizontal({{1.0, 3.0}, {2.0, 1.5}});
  CHECK(layered.eval({0.2, -1.0}) == 1.5);
  CHECK(layered.eval({0.2, -0.5}) == 3.0);
  CHECK(layered.eval({0.2, -7.0}) == 1.5);
}

TEST_CASE("region tags") {
  const WeightField ldhc = WeightField::lite_dmd_heavy_core();
  CHECK(ldhc.region_of({0, 0}) == "K_in");
  CHECK(ldhc.region_of({0.6, 0.3}) == "K_ann");
  CHECK(ldhc.region_of({0.9, 0.9}) == "K_out");
  CHECK(WeightField::heavy_disk(2.0).region_of({0.9, 0}) == "outside");
  CHECK(WeightField::heavy_disk(2.0).region_of({0.1, 0}) == "K");
  CHECK(WeightField::three_heavy_diamonds().region_of({0.0, 0.25}) == "K_mid");
}

TEST_CASE("positivity on a 1024^2 sample of the square") {
  for (const WeightField& w : catalog_defaults()) {
    double lo = 1e300;
    for (int j = 0; j < 1024; ++j) {
      for (int i = 0; i < 1024; ++i) lo = std::min(lo, w.eval({-1.0 + (i + 0.5) / 512.0, -1.0 + (j + 0.5) / 512.0}));
    }
    INFO(w.name());
    CHECK(lo > 0.0);
  }
}

TEST_CASE("mirror symmetries on random samples") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  for (const WeightField& w : catalog_defaults()) {
    const bool up_down = w.kind() != WeightKind::three_heavy_diamonds;
    CHECK(w.symmetric_in_y() == up_down);
    for (int k = 0; k < 20000; ++k) {
      const Point p{u(rng), u(rng)};
      INFO(w.name() << " at " << p.x << "," << p.y);
      REQUIRE(w.eval(p) == w.eval({-p.x, p.y}));
      if (up_down) REQUIRE(w.eval(p) == w.eval({p.x, -p.y}));
    }
  }
}

TEST_CASE("Lipschitz bound on continuous entries") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.1, 1.1), d(-1e-3, 1e-3);
  for (const WeightField& w : {WeightField::light_diamond(0.5), WeightField::light_diamond_tight(0.5),
                               WeightField::lite_dmd_heavy_core(), WeightField::interpolated_layers(0.3, 0.6, 1, 2)}) {
    REQUIRE(w.is_continuous());
    const double lip = w.lipschitz_bound();
    double worst = 0.0;
    for (int k = 0; k < 50000; ++k) {
      const Point p{u(rng), u(rng)};
      const Point q = p + Point{d(rng), d(rng)};
      worst = std::max(worst, std::abs(w.eval(p) - w.eval(q)) / distance(p, q));
    }
    INFO(w.name());
    CHECK(worst <= lip * (1.0 + 1e-9));
  }
  CHECK_FALSE(WeightField::heavy_diamond(2.0).is_continuous());
}

TEST_CASE("segment integrals are exact on piecewise-affine weights") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const WeightField& w : catalog_defaults()) {
    for (int k = 0; k < 12; ++k) {
      const Point a{u(rng), u(rng)}, b{u(rng), u(rng)};
      INFO(w.name());
      CHECK(w.segment_integral(a, b) == doctest::Approx(brute_integral(w, a, b)).epsilon(2e-6));
    }
  }
  // 5/8 along the x-axis through the core.
  CHECK(WeightField::lite_dmd_heavy_core().segment_integral({-0.5, 0}, {0.5, 0}) ==
        doctest::Approx(0.625).epsilon(1e-15));
  CHECK(WeightField::constant().segment_integral({0, 0}, {3, 4}) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(WeightField::heavy_diamond(2.0).segment_integral({-1, 0}, {1, 0}) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("rotated frames") {
  const WeightField w = WeightField::three_heavy_diamonds(2.0);
  const double angle = 0.7;
  const WeightField r = w.rotated(angle);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 2000; ++k) {
    const Point p{u(rng), u(rng)};
    REQUIRE(r.eval(p) == doctest::Approx(w.eval(rotate(p, angle))).epsilon(1e-12));
  }
  const Point a{-0.8, 0.1}, b{0.7, -0.2};
  CHECK(r.segment_integral(a, b) == doctest::Approx(w.segment_integral(rotate(a, angle), rotate(b, angle))).epsilon(1e-12));
}

TEST_CASE("catalog lookup and parameter ranges") {
  CHECK(WeightField::from_name("heavy_diamond").alpha().value() == doctest::Approx(std::sqrt(1.5)));
  CHECK(WeightField::from_name("heavy_disk", 2.0).eval({0, 0}) == 2.0);
  CHECK_THROWS_AS((void)WeightField::from_name("heavy_diamond", 1.0), ConfigError);
  CHECK_THROWS_AS((void)WeightField::from_name("heavy_disk", 1.5), ConfigError);
  CHECK_NOTHROW((void)WeightField::from_name("heavy_disk", std::numbers::pi / 2));
  CHECK_THROWS_AS((void)WeightField::from_name("light_diamond_tight", 1.0), ConfigError);
  CHECK_THROWS_AS((void)WeightField::from_name("three_heavy_diamonds", 1.4), ConfigError);
  CHECK_THROWS_AS((void)WeightField::from_name("lite_dmd_heavy_core", 1.0), ConfigError);
  CHECK_THROWS_AS((void)WeightField::from_name("nope"), ConfigError);
  CHECK(kHeavyDiamondTipThreshold == doctest::Approx(3.0 / std::sqrt(5.0)));
  bool has_hd = false, has_ldhc = false;
  for (const CatalogEntry& e : weight_catalog()) {
    has_hd |= e.name == "heavy_diamond";
    has_ldhc |= e.name == "lite_dmd_heavy_core";
  }
  CHECK(has_hd);
  CHECK(has_ldhc);
}

TEST_CASE("custom piecewise weights") {
  const WeightField w = WeightField::custom_piecewise(
      {Piece{"ring", {{Shape::l2_ball({0, 0}, 0.6), true}, {Shape::l2_ball({0, 0}, 0.3), false}}, {3.0, 0, {}, {}}},
       Piece{"half", {{Shape::half_plane({1, 0}, -0.5), true}}, {2.0, 0, {}, {0.0, 1.0}}}},
      {1.0, 0, {}, {}});
  CHECK(w.eval({0.45, 0}) == 3.0);
  CHECK(w.region_of({0.45, 0}) == "ring");
  CHECK(w.eval({0.1, 0}) == 1.0);
  CHECK(w.eval({-0.8, 0.5}) == doctest::Approx(2.5));
  CHECK(w.region_of({-0.8, 0.5}) == "half");
  CHECK_THROWS((void)WeightField::constant(0.0));
}
