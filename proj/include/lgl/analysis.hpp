#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lgl/geometry.hpp"
#include "lgl/graph_geodesic.hpp"
#include "lgl/kernels.hpp"
#include "lgl/stacker.hpp"
#include "lgl/weight_field.hpp"

namespace lgl {

/// How a quantity is judged against its expectation.
///   abs:      |value - expected| <= tolerance
///   rel:      |value - expected| <= tolerance * |expected|
///   at_least: value >= expected - tolerance
///   at_most:  value <= expected + tolerance
enum class Check { abs, rel, at_least, at_most };

std::string_view to_string(Check c);

struct Quantity {
  std::string label;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  Check check = Check::abs;
  bool pass = false;

  /// Pass flag recomputed from the stored numbers.
  [[nodiscard]] bool evaluate() const;
};

struct ExperimentReport {
  std::string name;
  std::vector<Quantity> quantities;
  std::vector<std::string> artifacts;

  Quantity& add(std::string label, double value, double expected, double tolerance, Check check = Check::abs);
  [[nodiscard]] bool all_pass() const;
  [[nodiscard]] std::vector<std::string> failing() const;
};

/// Distance from the boundary point z to the weighted geodesic joining the
/// two points of the unit circle at Euclidean distance r from z (the lower
/// of tied geodesics in the frame where z is the bottom point). Uses ray
/// shooting when the weight is layered, else the lattice solver. Throws
/// std::invalid_argument when z is off the circle or r is outside (0, 2),
/// where the circle around z meets the boundary in fewer than two points.
double curvature_clearance(const WeightField& w, Point z, double r, const GraphOptions& options = {});

/// Cell-centred binary raster over [-1, 1]^2, row-major from the bottom row.
struct RasterSet {
  int res = 0;
  std::vector<unsigned char> cells;

  RasterSet() = default;
  explicit RasterSet(int resolution) : res(resolution), cells(static_cast<std::size_t>(resolution) * resolution, 0) {}
  [[nodiscard]] Point center(int i, int j) const {
    const double s = 2.0 / res;
    return {-1.0 + (i + 0.5) * s, -1.0 + (j + 0.5) * s};
  }
  [[nodiscard]] unsigned char at(int i, int j) const { return cells[static_cast<std::size_t>(j) * res + i]; }
  unsigned char& at(int i, int j) { return cells[static_cast<std::size_t>(j) * res + i]; }
};

RasterSet set_intersection(const RasterSet& a, const RasterSet& b);
RasterSet set_union(const RasterSet& a, const RasterSet& b);

/// Edge weights of the raster: w averaged over the two cells of each edge,
/// times the spacing. Reused across many perimeter evaluations.
struct PerimeterWeights {
  int res = 0;
  std::vector<double> horizontal;  // edge (i, j)-(i+1, j) at j * (res - 1) + i
  std::vector<double> vertical;    // edge (i, j)-(i, j+1) at j * res + i

  PerimeterWeights(const WeightField& w, int resolution);
};

/// Sum of edge weights over interior edges separating the set from its
/// complement.
double discrete_perimeter(const RasterSet& s, const PerimeterWeights& pw);

struct SubmodularityResult {
  int trials = 0;
  int passed = 0;
  double worst_excess = 0.0;  // max of P(A&B) + P(A|B) - P(A) - P(B)
};

/// Random pairs of unions of 1 to 4 random l1 / l2 balls at resolution
/// `res`; a trial passes when P(A&B) + P(A|B) <= P(A) + P(B) + eps with
/// eps = 1e-12 (P(A) + P(B)).
SubmodularityResult submodularity_check(int res, int trials, std::uint64_t seed,
                                        const WeightField& w = WeightField::constant());

/// Every unordered pair of axis-aligned rectangles on the 16 x 16 grid
/// (18496 rectangles), unit edge weights.
kernels::PairScan rectangle_pairs16();

struct DiamondThresholds {
  double t0 = 0.0;  // bottom-tip path and three-top-tip path tie
  double t1 = 0.0;  // boundary point in line with the small and a large top tip
};

/// Bisection to 1e-8 on (3/4, 11/8). t0 compares the weighted lengths (at
/// the given alpha) of the two tip paths; t1 is where the segment from the
/// left boundary point to the small top tip stops picking up weight from the
/// large diamond. Throws std::invalid_argument for
/// alpha < sqrt(2), SolverError when a bracket has no sign change.
DiamondThresholds three_diamonds_thresholds(double alpha = std::sqrt(2.0));

struct Nonuniqueness {
  double area = 0.0;       // weighted area where |uA - uB| > 2 level spacings
  double band_area = 0.0;  // the part where uA or uB lies in the requested band
  double energy_a = 0.0;
  double energy_b = 0.0;
  double energy_rel_gap = 0.0;
  bool energies_match = false;  // energy_rel_gap <= 0.005
};

/// Compares two stacks over the same weight and sample grid.
Nonuniqueness compare_stacks(const SolutionStack& a, const SolutionStack& b,
                             std::optional<std::pair<double, double>> band = std::nullopt);

/// Builds both stacks on `levels` and compares them. Throws
/// std::invalid_argument when the policies coincide.
Nonuniqueness nonuniqueness_gap(const WeightField& w, BranchPolicy a, BranchPolicy b,
                                const std::vector<double>& levels = uniform_levels(401),
                                const StackOptions& options = {},
                                std::optional<std::pair<double, double>> band = std::nullopt);

/// lambda * a + (1 - lambda) * b sample by sample. Throws
/// std::invalid_argument unless lambda is in [0, 1] and the grids match.
GridField convex_combination(const GridField& a, const GridField& b, double lambda);

/// Weighted length of the segment from (-eps, b) to the y-axis at angle
/// theta with the horizontal, on lite_dmd_heavy_core.
double ldhc_probe_length(double eps, double b, double theta);

/// Straight vs kinked path lengths, horizontal crossing of the y-axis for
/// t in {0.9, 1, 1.1}, and the sign of the angular derivative at +-0.3.
ExperimentReport litedmdheavycore_checks();

/// Snell identities on `instances` random subcritical cases plus the
/// two-layer kink against a golden-section minimisation.
ExperimentReport snell_suite(std::uint64_t seed, int instances = 10000);

ExperimentReport thresholds_suite();
ExperimentReport submodularity_suite(std::uint64_t seed);
ExperimentReport clearance_suite(std::uint64_t seed);

/// Names accepted by run_suite, in report order.
const std::vector<std::string>& suite_names();
/// Throws ConfigError for an unknown name.
ExperimentReport run_suite(std::string_view name, std::uint64_t seed);

}  // namespace lgl
