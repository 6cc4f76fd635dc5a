#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "lgl/geodesy.hpp"
#include "lgl/geometry.hpp"
#include "lgl/graph_geodesic.hpp"
#include "lgl/weight_field.hpp"

namespace lgl {

/// Boundary data of every stacked problem: f(x, y) = y + 1.
inline double boundary_data(Point p) { return p.y + 1.0; }

/// Half-width of the level-t chord, sqrt(1 - (t-1)^2).
double boundary_half_width(double t);

/// The two points of the unit circle where f = t, left one first.
std::pair<Point, Point> boundary_points(double t);

/// Uniform level grid t_k = (k - 1/2) * 2 / n, k = 1..n.
std::vector<double> uniform_levels(int n);

/// Minimal (upper) curves at and above `switch_level`, maximal (lower)
/// curves below it. switch_level 0 gives all-minimal, 2 all-maximal.
struct BranchPolicy {
  double switch_level = 1.0;

  [[nodiscard]] Branch branch_at(double t) const { return t >= switch_level ? Branch::minimal : Branch::maximal; }
  static BranchPolicy all_minimal() { return {0.0}; }
  static BranchPolicy all_maximal() { return {2.0}; }
  friend bool operator==(const BranchPolicy&, const BranchPolicy&) = default;
};

/// Boundary of the superlevel set E_t as a graph y = g_t(x).
class LevelCurve {
 public:
  LevelCurve(double level, Branch branch, Polyline path, double weighted_length);

  [[nodiscard]] double level() const { return level_; }
  [[nodiscard]] Branch branch() const { return branch_; }
  [[nodiscard]] const Polyline& path() const { return path_; }
  [[nodiscard]] double weighted_length() const { return weighted_length_; }
  [[nodiscard]] double half_width() const { return half_width_; }
  /// g_t(x) by linear interpolation; t - 1 outside the chord's x-range,
  /// which keeps "above the curve" equal to membership in E_t there too.
  [[nodiscard]] double value_at(double x) const;

 private:
  double level_;
  Branch branch_;
  Polyline path_;
  double weighted_length_;
  double half_width_;
};

/// Level curve from a prepared solver (reusable across levels).
LevelCurve level_curve(const GraphGeodesicSolver& solver, double t, Branch branch, double polish_tol = 1e-10);
LevelCurve level_curve(const WeightField& w, double t, Branch branch, double polish_tol = 1e-10);

/// Cell-centred raster over [-1, 1]^2; sample (i, j) sits at
/// (-1 + (i + 1/2) s, -1 + (j + 1/2) s) with s = 2 / res. Row j = 0 is the
/// bottom row.
struct GridField {
  int res = 0;
  double spacing = 0.0;
  std::vector<double> samples;      // res * res, row-major from the bottom row
  std::vector<unsigned char> mask;  // 1 inside the open unit disk

  GridField() = default;
  explicit GridField(int resolution);
  [[nodiscard]] Point center(int i, int j) const {
    return {-1.0 + (i + 0.5) * spacing, -1.0 + (j + 0.5) * spacing};
  }
  [[nodiscard]] double& at(int i, int j) { return samples[static_cast<std::size_t>(j) * res + i]; }
  [[nodiscard]] double at(int i, int j) const { return samples[static_cast<std::size_t>(j) * res + i]; }
  [[nodiscard]] bool inside(int i, int j) const { return mask[static_cast<std::size_t>(j) * res + i] != 0; }
  /// Index of the sample column / row nearest to a coordinate.
  [[nodiscard]] int column_of(double x) const;
  [[nodiscard]] int row_of(double y) const;
};

struct StackOptions {
  int resolution = 512;       // raster size of the solution field
  double polish_tol = 1e-8;   // vertex refinement step of each level curve
  GraphOptions graph{};
  int threads = 0;            // 0: hardware concurrency
};

/// Nested family of level curves and the field u it induces.
class SolutionStack {
 public:
  SolutionStack(WeightField w, std::vector<LevelCurve> curves, BranchPolicy policy, GridField field);

  [[nodiscard]] const WeightField& weight() const { return w_; }
  [[nodiscard]] const std::vector<LevelCurve>& curves() const { return curves_; }
  [[nodiscard]] const GridField& field() const { return field_; }
  [[nodiscard]] const BranchPolicy& policy() const { return policy_; }
  [[nodiscard]] std::vector<double> levels() const;
  /// Largest gap between consecutive levels (the level spacing of a uniform grid).
  [[nodiscard]] double level_spacing() const;

 private:
  WeightField w_;
  std::vector<LevelCurve> curves_;
  BranchPolicy policy_;
  GridField field_;
};

/// Computes every level curve, checks nesting within one raster cell
/// (NestingError names the offending pair) and fills u(p) = sup{t : p lies
/// on or above g_t}; 0 below every curve and f outside the disk.
SolutionStack stack(const WeightField& w, const std::vector<double>& levels, BranchPolicy policy,
                    const StackOptions& options = {});

/// Same with a prepared solver for w.
SolutionStack stack(const GraphGeodesicSolver& solver, const std::vector<double>& levels, BranchPolicy policy,
                    const StackOptions& options = {});

/// sup: u(p) = sup{t : p on or above g_t}, a staircase between levels.
/// bridged: between two curves closer than `bridge_cells` samples in a
/// column, u is interpolated linearly in y; wider gaps (jumps) stay sharp.
enum class Reconstruction { sup, bridged };

/// Fills the raster from curves sorted by level; crossings left by the
/// solver are clipped in each column before the search.
GridField fill_field(const std::vector<LevelCurve>& curves, int resolution,
                     Reconstruction recon = Reconstruction::sup, double bridge_cells = 4.0);

/// Smallest value of g_s - g_t over pairs s > t and sampled x; negative
/// values measure crossings.
double nesting_margin(const std::vector<LevelCurve>& curves, int samples = 1024);

/// Coarea energy: sum of weighted lengths times the width of each level's
/// midpoint bin in (0, 2).
double bv_energy(const SolutionStack& s);

/// lower: min of w over the stencil, which prices a jump lying on an
/// interface at the lighter side like the semicontinuous weight does.
enum class EdgeWeight { lower, mean };

/// Discrete weighted total variation of the raster: isotropic forward
/// differences, each weighted from w at the three stencil samples, over
/// samples whose stencil lies inside the disk.
double discrete_tv(const GridField& field, const WeightField& w, EdgeWeight rule = EdgeWeight::lower);

/// Max over n_boundary equispaced boundary points z of the mean |u - f(z)|
/// over samples in B(z, r) inside the disk. Points z within r of an entry of
/// `exclude` are skipped. Throws std::invalid_argument for an empty ball.
double trace_error(const SolutionStack& s, int n_boundary, double r, const std::vector<Point>& exclude = {});

/// Samples whose 3x3 neighbourhood (inside the disk) oscillates by more than
/// gap_threshold.
std::vector<Point> jump_set(const SolutionStack& s, double gap_threshold);

/// u just above minus u just below height y in the sample column nearest x.
double vertical_gap(const GridField& field, double x, double y);

}  // namespace lgl
