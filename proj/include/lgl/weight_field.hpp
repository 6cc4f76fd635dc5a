#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lgl/geometry.hpp"

namespace lgl {

/// Threshold on the heavy-diamond weight above which the geodesic between
/// (-1,0) and (1,0) passes through a tip instead of crossing the diamond.
inline const double kHeavyDiamondTipThreshold = 3.0 / std::sqrt(5.0);

enum class WeightKind {
  constant,
  heavy_diamond,
  heavy_disk,
  light_diamond,
  light_diamond_tight,
  three_heavy_diamonds,
  lite_dmd_heavy_core,
  layered_horizontal,
  custom_piecewise,
};

std::string_view to_string(WeightKind kind);

/// Primitive region boundary. Each shape has a signed level function that is
/// negative strictly inside.
struct Shape {
  enum class Kind { l1_ball, l2_ball, half_plane };

  Kind kind = Kind::l1_ball;
  Point center{};     // balls
  double radius = 0;  // balls
  Vec normal{};       // half-plane: inside is dot(normal, p) < offset
  double offset = 0;

  static Shape l1_ball(Point c, double r) { return {Kind::l1_ball, c, r, {}, 0}; }
  static Shape l2_ball(Point c, double r) { return {Kind::l2_ball, c, r, {}, 0}; }
  static Shape half_plane(Vec n, double off) { return {Kind::half_plane, {}, 0, n, off}; }

  [[nodiscard]] double level(Point p) const;
  friend bool operator==(const Shape&, const Shape&) = default;
};

struct Constraint {
  Shape shape;
  bool inside = true;
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// w(p) = constant + l1_slope * |p - l1_center|_1 + dot(gradient, p).
/// Affine along any segment that does not cross the axes through l1_center.
struct AffineWeight {
  double constant = 1.0;
  double l1_slope = 0.0;
  Point l1_center{};
  Vec gradient{};

  [[nodiscard]] double operator()(Point p) const {
    return constant + l1_slope * l1_norm(p - l1_center) + dot(gradient, p);
  }
  [[nodiscard]] bool is_constant() const { return l1_slope == 0.0 && gradient == Vec{}; }
  friend bool operator==(const AffineWeight&, const AffineWeight&) = default;
};

/// One region of a piecewise weight: the intersection of its constraints.
struct Piece {
  std::string region;
  std::vector<Constraint> constraints;
  AffineWeight weight;
  friend bool operator==(const Piece&, const Piece&) = default;
};

/// Horizontal layer: weight `weight` down to depth `depth` (y = -depth).
struct Layer {
  double depth = 0;
  double weight = 1;
  friend bool operator==(const Layer&, const Layer&) = default;
};

/// A positive weight on the plane, piecewise affine in the l1 distance to a
/// center (or in a linear coordinate) over regions bounded by l1 balls, l2
/// balls and half-planes.
///
/// Pieces are matched first-to-last with strict inequalities. On a region
/// interface the value is the smaller of the one-sided limits, which makes
/// every catalog entry lower semicontinuous.
///
/// Immutable after construction; all queries are const and thread-safe.
class WeightField {
 public:
  static WeightField constant(double value = 1.0);
  static WeightField heavy_diamond(double alpha = std::sqrt(1.5));
  static WeightField heavy_disk(double alpha = 2.0);
  static WeightField light_diamond(double alpha = 0.5);
  static WeightField light_diamond_tight(double alpha = 0.5);
  static WeightField three_heavy_diamonds(double alpha = std::sqrt(2.0));
  static WeightField lite_dmd_heavy_core();
  static WeightField layered_horizontal(std::vector<Layer> layers);
  static WeightField custom_piecewise(std::vector<Piece> pieces, AffineWeight fallback,
                                      std::string fallback_region = "outside");
  /// Constant w1 above y = -z1, constant w2 below y = -z2, linear in y between.
  static WeightField interpolated_layers(double z1, double z2, double w1, double w2);

  /// Catalog lookup by name; `alpha` overrides the default parameter of
  /// entries that take one. Throws ConfigError for unknown names or
  /// parameters outside the documented range.
  static WeightField from_name(std::string_view name, std::optional<double> alpha = std::nullopt);

  [[nodiscard]] double operator()(Point p) const { return eval(p); }
  [[nodiscard]] double eval(Point p) const;
  /// Name of the region containing `p` (for interfaces, the region whose
  /// one-sided limit is the returned weight).
  [[nodiscard]] std::string region_of(Point p) const;

  /// Exact integral of w along the segment [a, b] with respect to arc length.
  [[nodiscard]] double segment_integral(Point a, Point b) const;

  /// Same field viewed in a frame rotated by `angle`:
  /// rotated(angle).eval(p) == eval(rotate(p, angle)).
  [[nodiscard]] WeightField rotated(double angle) const;

  [[nodiscard]] WeightKind kind() const { return kind_; }
  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] std::optional<double> alpha() const { return alpha_; }
  [[nodiscard]] const std::vector<Layer>& layers() const { return layers_; }
  [[nodiscard]] const std::vector<Piece>& pieces() const { return pieces_; }
  [[nodiscard]] const AffineWeight& fallback() const { return fallback_; }
  [[nodiscard]] double frame_angle() const { return frame_angle_; }

  [[nodiscard]] bool is_continuous() const { return continuous_; }
  [[nodiscard]] bool is_piecewise_constant() const;
  /// w(x,y) == w(x,-y) for every point (in the unrotated frame).
  [[nodiscard]] bool symmetric_in_y() const;
  /// Upper bound on the Lipschitz constant inside each piece.
  [[nodiscard]] double lipschitz_bound() const;
  /// Corners of the l1 regions, candidates for diffracted shortest paths.
  [[nodiscard]] std::vector<Point> corners() const;

 private:
  WeightField() = default;
  void finalize();
  [[nodiscard]] Point to_base(Point p) const;
  [[nodiscard]] int strict_piece(Point p) const;  // -1: fallback, -2: on an interface
  [[nodiscard]] int limit_piece(Point p) const;   // index of the piece realizing eval(p)
  [[nodiscard]] const AffineWeight& formula(int piece) const {
    return piece < 0 ? fallback_ : pieces_[static_cast<std::size_t>(piece)].weight;
  }
  [[nodiscard]] double base_segment_integral(Point a, Point b) const;

  WeightKind kind_ = WeightKind::constant;
  std::string name_ = "constant";
  std::optional<double> alpha_;
  std::vector<Layer> layers_;
  std::vector<Piece> pieces_;
  AffineWeight fallback_{};
  std::string fallback_region_ = "outside";
  bool continuous_ = true;
  double frame_angle_ = 0.0;

  // Derived lookup tables.
  std::vector<Shape> shapes_;
  std::vector<std::vector<std::pair<int, bool>>> piece_constraints_;  // (shape index, inside)
  std::vector<Point> l1_centers_;
};

struct CatalogEntry {
  std::string name;
  WeightKind kind;
  std::string parameters;  // human-readable parameter range
  std::string reproduces;  // which example the entry reproduces
};

/// Named entries addressable from the command line and config files.
const std::vector<CatalogEntry>& weight_catalog();

}  // namespace lgl
