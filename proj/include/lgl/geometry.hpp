#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace lgl {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
  friend constexpr Point operator*(Point p, double s) { return {s * p.x, s * p.y}; }
  friend constexpr bool operator==(Point a, Point b) = default;
};

/// Directions share the representation of points.
using Vec = Point;

constexpr double dot(Vec a, Vec b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec a, Vec b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec v) { return std::hypot(v.x, v.y); }
inline double l1_norm(Vec v) { return std::abs(v.x) + std::abs(v.y); }
inline double distance(Point a, Point b) { return norm(b - a); }
inline Vec normalized(Vec v) {
  const double n = norm(v);
  return {v.x / n, v.y / n};
}
/// Counter-clockwise rotation by `angle` radians.
inline Point rotate(Point p, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

/// Distance from `p` to the closed segment [a, b].
double point_segment_distance(Point p, Point a, Point b);

/// Ordered vertex chain with at least two vertices and no repeated
/// consecutive vertex.
class Polyline {
 public:
  Polyline() = default;
  explicit Polyline(std::vector<Point> vertices);

  [[nodiscard]] std::span<const Point> vertices() const { return vertices_; }
  [[nodiscard]] std::size_t size() const { return vertices_.size(); }
  [[nodiscard]] Point front() const { return vertices_.front(); }
  [[nodiscard]] Point back() const { return vertices_.back(); }
  [[nodiscard]] Point operator[](std::size_t i) const { return vertices_[i]; }

  [[nodiscard]] double euclidean_length() const;
  /// Minimum distance from `p` to any point of the chain.
  [[nodiscard]] double distance_to(Point p) const;
  [[nodiscard]] Polyline rotated(double angle) const;

 private:
  std::vector<Point> vertices_;
};

}  // namespace lgl
