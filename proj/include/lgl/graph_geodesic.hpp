#pragma once

#include <cstdint>
#include <vector>

#include "lgl/geodesy.hpp"
#include "lgl/geometry.hpp"
#include "lgl/weight_field.hpp"

namespace lgl {

struct GraphOptions {
  int columns_per_unit = 64;  // column spacing dx = 1 / columns_per_unit
  int rows_per_unit = 256;    // lattice row spacing h = 1 / rows_per_unit
  int max_row_step = 16;      // steepest lattice edge: max_row_step * h / dx
  double area_bias = 1e-9;    // tie-break towards the requested branch
};

/// Weighted shortest paths of graph form y = g(x) inside the closed unit
/// disk. A min-plus dynamic program over a column lattice finds the global
/// optimum among lattice paths; a banded dynamic program on the same columns
/// then moves the vertices continuously until the step falls below the
/// requested tolerance. Exact ties are broken towards larger enclosed area
/// above the path for Branch::minimal and smaller for Branch::maximal.
///
/// Construction tabulates every lattice edge cost once; solve() is const and
/// may run concurrently.
class GraphGeodesicSolver {
 public:
  explicit GraphGeodesicSolver(WeightField w, GraphOptions options = {});

  /// Path from a to b with a.x < b.x, both in the closed disk. Vertices are
  /// a, the lattice columns strictly between, and b. Throws SolverError when
  /// the optimum needs the steepest lattice edge (a non-graph geodesic).
  [[nodiscard]] Polyline solve(Point a, Point b, Branch branch, double polish_tol = 1e-10) const;

  [[nodiscard]] const WeightField& weight() const { return w_; }
  [[nodiscard]] const GraphOptions& options() const { return opt_; }
  [[nodiscard]] double dx() const { return dx_; }

 private:
  [[nodiscard]] double column_x(int c) const { return c * dx_; }
  [[nodiscard]] double row_y(int j) const { return (j - rows_half_) * h_; }
  [[nodiscard]] bool node_valid(int c, int j) const;
  [[nodiscard]] const double* edge_costs(int c, int m) const;  // column c -> c+1, row step m, by destination row
  [[nodiscard]] std::vector<double> polish(Point a, Point b, int c_first, std::vector<double> ys, double sign,
                                           double tol) const;

  WeightField w_;
  GraphOptions opt_;
  double dx_ = 0, h_ = 0;
  int cols_half_ = 0;  // columns c in [-cols_half_, cols_half_]
  int rows_half_ = 0;  // rows j in [0, 2 rows_half_]
  int rows_ = 0;
  std::vector<int> col_row_lo_, col_row_hi_;  // valid row range per column
  std::vector<double> costs_;                 // [(c, m, j)] flattened
};

/// Graph-form geodesic between arbitrary points of the closed disk: the
/// problem is rotated so that a -> b points along +x, solved there, and
/// rotated back.
Polyline graph_geodesic(const WeightField& w, Point a, Point b, Branch branch, double polish_tol = 1e-10,
                        GraphOptions options = {});

}  // namespace lgl
