#include "lgl/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace lgl {

double point_segment_distance(Point p, Point a, Point b) {
  const Vec d = b - a;
  const double dd = dot(d, d);
  if (dd == 0.0) return distance(p, a);
  const double s = std::clamp(dot(p - a, d) / dd, 0.0, 1.0);
  return distance(p, a + s * d);
}

Polyline::Polyline(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) throw std::invalid_argument("polyline needs at least two vertices");
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    if (vertices_[i] == vertices_[i - 1]) {
      throw std::invalid_argument("polyline has a repeated consecutive vertex");
    }
  }
  for (const Point& p : vertices_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw std::invalid_argument("polyline vertex is not finite");
    }
  }
}

double Polyline::euclidean_length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < vertices_.size(); ++i) total += distance(vertices_[i - 1], vertices_[i]);
  return total;
}

double Polyline::distance_to(Point p) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    best = std::min(best, point_segment_distance(p, vertices_[i - 1], vertices_[i]));
  }
  return best;
}

Polyline Polyline::rotated(double angle) const {
  std::vector<Point> out;
  out.reserve(vertices_.size());
  for (const Point& p : vertices_) out.push_back(rotate(p, angle));
  return Polyline(std::move(out));
}

}  // namespace lgl
