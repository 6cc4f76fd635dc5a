#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lgl/geometry.hpp"
#include "lgl/weight_field.hpp"

namespace lgl {

/// I(path, w) = integral of w along the path. Each segment is split into
/// pieces no longer than `quad_step` and every piece is integrated by the
/// midpoint rule between consecutive region interfaces, which is exact for
/// the piecewise-affine weights of the catalog.
double weighted_length(const Polyline& path, const WeightField& w, double quad_step = 1.0);

/// Refraction angle (from the interface normal) after passing from weight
/// `w_in` to weight `w_out`; nullopt signals total internal reflection.
/// Throws std::invalid_argument for nonpositive weights or angles outside
/// [0, pi/2].
std::optional<double> snell_refract(double w_in, double w_out, double theta_in);

/// Angle in the last medium of a chain of parallel interfaces. Throws
/// TotalInternalReflection naming the first supercritical interface.
double snell_chain(std::span<const double> weights, double theta_1);

struct RayState {
  Point position;
  Vec direction;
  int layer_index = 0;
};

/// Piecewise-constant medium whose interfaces are level sets of one
/// coordinate: -y (horizontal layers), |p|_1 (diamond shells) or |p|_2
/// (round shells). Layer k lies between interfaces[k-1] and interfaces[k].
struct LayeredMedium {
  enum class Geometry { horizontal, l1_shells, l2_shells };

  Geometry geometry = Geometry::horizontal;
  std::vector<double> interfaces;  // strictly increasing coordinate values
  std::vector<double> weights;     // interfaces.size() + 1 entries

  [[nodiscard]] double coordinate(Point p) const;
  /// Unit normal pointing towards increasing coordinate. On the axes of the
  /// l1 geometry the sign of the zero component follows `heading`.
  [[nodiscard]] Vec normal(Point p, Vec heading) const;
  /// Layer containing coordinate value c (interfaces belong to the outer layer).
  [[nodiscard]] int layer_of(double c) const;
};

/// Layered description of a weight. Continuous diamond weights are replaced
/// by `shells` constant l1 shells whose weight is the value on the outer
/// radius. Throws SolverError for weights without layered structure.
LayeredMedium layered_medium_of(const WeightField& w, int shells = 4096);

/// Stop condition for ray tracing: returns the fraction in (0, 1] of the
/// segment [a, b] at which the ray must stop, or nullopt.
using StopPredicate = std::function<std::optional<double>(Point a, Point b)>;

StopPredicate stop_at_unit_circle();
/// Stops on the line dot(normal, p) = offset.
StopPredicate stop_at_line(Vec normal, double offset);
StopPredicate stop_at_y_axis();
StopPredicate stop_at_l1_level(double radius);

struct TraceResult {
  Polyline path;
  std::vector<double> angles;  // angle from the interface normal in each traversed layer
  std::vector<int> layers;     // layer index of each traversed segment
  RayState final_state;
};

/// Straight propagation inside each layer with Snell refraction on every
/// interface. `theta_0` is measured from the normal n at the start, with
/// direction cos(theta) n + sin(theta) t and t = (n.y, -n.x). A start on an
/// interface is treated as arriving from the layer behind the heading.
/// Throws TotalInternalReflection, or SolverError when the stop predicate
/// does not fire within `max_segments`.
TraceResult trace_layered_ray(const LayeredMedium& medium, Point start, double theta_0,
                              const StopPredicate& stop, int max_segments = 200000);

/// Same with an explicit unit launch direction.
TraceResult trace_layered_ray_dir(const LayeredMedium& medium, Point start, Vec direction,
                                  const StopPredicate& stop, int max_segments = 200000);

enum class Branch { minimal, maximal };

/// Weighted-length-stationary path from a to b by shooting on the launch
/// angle (2048-sample scan plus bisection), together with corner-diffracted
/// candidates for piecewise-constant weights. Returns the candidate of least
/// weighted length; exact ties go to the path on the left of a->b for
/// Branch::minimal and to the right for Branch::maximal. Throws SolverError
/// when nothing hits b or when the result is longer than the straight
/// segment.
Polyline shoot_two_point(const WeightField& w, Point a, Point b, double tol = 1e-10,
                         Branch branch = Branch::minimal);

/// H(t0) = 1/2 int_{t0}^{1} [1 - (1+t0)/sqrt(2(1+t)^2 - (1+t0)^2)] dt by
/// adaptive Simpson quadrature to 1e-8. Throws std::invalid_argument for t0
/// outside (0, 1).
double H_of(double t0);

/// Height gained by the discrete Snell chain through n diamond shells
/// starting from shell k0.
double H_discrete(int n, int k0);

/// True iff the boundary arc of the heavy disk is no longer than the chord
/// through it: theta <= 2 alpha sin(theta/2). Ties count as arc.
bool heavy_disk_arc_test(double alpha, double theta);

/// 2 alpha sin(theta/2) - theta: chord cost minus arc cost.
double heavy_disk_arc_slack(double alpha, double theta);

}  // namespace lgl
