#pragma once

#include <functional>

#include "lgl/geometry.hpp"
#include "lgl/weight_field.hpp"

namespace lgl {

enum class Stencil { eight, sixteen };

/// trapezoid: |p - q| (w(p) + w(q)) / 2. exact: integral of w along the
/// edge, which makes every grid path an admissible competitor.
enum class EdgeRule { trapezoid, exact };

struct OracleOptions {
  Stencil stencil = Stencil::sixteen;
  EdgeRule rule = EdgeRule::trapezoid;
  /// Optional further restriction of the node set (e.g. a corridor).
  std::function<bool(Point)> mask;
};

struct OraclePath {
  Polyline path;
  double cost = 0.0;
  int resolution = 0;
};

/// Dijkstra on the nodes (i/res, j/res) of the closed unit disk. The path
/// joins the nodes nearest to a and b; ties in the priority queue are broken
/// by node index, so results are deterministic. Throws std::invalid_argument
/// for endpoints outside the disk or res < 32, SolverError when the
/// endpoints are disconnected.
OraclePath grid_shortest_path(const WeightField& w, int res, Point a, Point b, const OracleOptions& options = {});

struct RefineResult {
  double cost = 0.0;
  int resolution = 0;
  double achieved_tol = 0.0;  // relative change between the last two resolutions
  bool converged = false;
};

/// Doubles the resolution from 128 until two successive costs differ by
/// less than rel_tol (relative) or the resolution would exceed 2048.
RefineResult refine_until(const WeightField& w, Point a, Point b, double rel_tol,
                          const OracleOptions& options = {});

}  // namespace lgl
