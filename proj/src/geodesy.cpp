#include "lgl/geodesy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lgl/error.hpp"

namespace lgl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFar = 1e6;  // look-ahead for rays in an unbounded layer

}  // namespace

double weighted_length(const Polyline& path, const WeightField& w, double quad_step) {
  if (path.size() < 2) throw std::invalid_argument("weighted_length needs at least two vertices");
  if (!(quad_step > 0.0)) throw std::invalid_argument("quad_step must be positive");
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const Point a = path[i], b = path[i + 1];
    const auto pieces = static_cast<long>(std::ceil(distance(a, b) / quad_step));
    if (pieces <= 1) {
      total += w.segment_integral(a, b);
      continue;
    }
    Point prev = a;
    for (long k = 1; k <= pieces; ++k) {
      const Point next = k == pieces ? b : a + (static_cast<double>(k) / static_cast<double>(pieces)) * (b - a);
      total += w.segment_integral(prev, next);
      prev = next;
    }
  }
  return total;
}

std::optional<double> snell_refract(double w_in, double w_out, double theta_in) {
  if (!(w_in > 0.0) || !(w_out > 0.0)) throw std::invalid_argument("weights must be positive");
  if (!(theta_in >= 0.0 && theta_in <= std::numbers::pi / 2)) {
    throw std::invalid_argument("incidence angle must lie in [0, pi/2]");
  }
  if (w_in == w_out) return theta_in;
  const double s = (w_in / w_out) * std::sin(theta_in);
  if (s > 1.0) return std::nullopt;
  return std::asin(s);
}

double snell_chain(std::span<const double> weights, double theta_1) {
  if (weights.empty()) throw std::invalid_argument("empty weight chain");
  for (double w : weights) {
    if (!(w > 0.0)) throw std::invalid_argument("weights must be positive");
  }
  double theta = theta_1;
  for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
    const auto next = snell_refract(weights[k], weights[k + 1], theta);
    if (!next) {
      std::ostringstream os;
      os << "total internal reflection at interface " << k + 1;
      throw TotalInternalReflection(static_cast<int>(k + 1), os.str());
    }
    theta = *next;
  }
  // The chain telescopes: only the two end weights matter.
  const double closed = (weights.front() / weights.back()) * std::sin(theta_1);
  if (std::abs(closed - std::sin(theta)) > 1e-12) {
    throw SolverError("Snell chain disagrees with its closed form");
  }
  return theta;
}

// ---------------------------------------------------------------------------
// Layered media

double LayeredMedium::coordinate(Point p) const {
  switch (geometry) {
    case Geometry::horizontal: return -p.y;
    case Geometry::l1_shells: return l1_norm(p);
    case Geometry::l2_shells: return norm(p);
  }
  return 0.0;
}

Vec LayeredMedium::normal(Point p, Vec heading) const {
  auto sgn = [](double v, double fallback) {
    if (v > 0.0) return 1.0;
    if (v < 0.0) return -1.0;
    return fallback >= 0.0 ? 1.0 : -1.0;
  };
  switch (geometry) {
    case Geometry::horizontal: return {0.0, -1.0};
    case Geometry::l1_shells: {
      const double r = std::numbers::sqrt2 / 2;
      return {r * sgn(p.x, heading.x), r * sgn(p.y, heading.y)};
    }
    case Geometry::l2_shells: {
      const double n = norm(p);
      return n > 0.0 ? Vec{p.x / n, p.y / n} : normalized(heading);
    }
  }
  return {};
}

int LayeredMedium::layer_of(double c) const {
  return static_cast<int>(std::upper_bound(interfaces.begin(), interfaces.end(), c) - interfaces.begin());
}

LayeredMedium layered_medium_of(const WeightField& w, int shells) {
  if (shells < 1) throw std::invalid_argument("shell count must be positive");
  if (w.frame_angle() != 0.0 && w.kind() != WeightKind::constant) {
    throw SolverError("rotated weight has no layered description; use the grid oracle");
  }
  LayeredMedium m;
  const double a = w.alpha().value_or(1.0);
  const auto n = static_cast<double>(shells);
  switch (w.kind()) {
    case WeightKind::constant:
      m.weights = {a};
      return m;
    case WeightKind::layered_horizontal:
      for (std::size_t k = 0; k + 1 < w.layers().size(); ++k) m.interfaces.push_back(w.layers()[k].depth);
      for (const Layer& l : w.layers()) m.weights.push_back(l.weight);
      return m;
    case WeightKind::heavy_diamond:
      m.geometry = LayeredMedium::Geometry::l1_shells;
      m.interfaces = {0.5};
      m.weights = {a, 1.0};
      return m;
    case WeightKind::heavy_disk:
      m.geometry = LayeredMedium::Geometry::l2_shells;
      m.interfaces = {0.5};
      m.weights = {a, 1.0};
      return m;
    case WeightKind::light_diamond_tight:
      m.geometry = LayeredMedium::Geometry::l1_shells;
      for (int k = 1; k <= shells; ++k) {
        m.interfaces.push_back(k / n);
        m.weights.push_back(a + (1.0 - a) * (k / n));
      }
      m.weights.push_back(1.0);
      return m;
    case WeightKind::light_diamond:
      m.geometry = LayeredMedium::Geometry::l1_shells;
      m.interfaces.push_back(0.5);
      m.weights.push_back(a);
      for (int k = 1; k <= shells; ++k) {
        m.interfaces.push_back(0.5 + 0.05 * (k / n));
        m.weights.push_back(a + (1.0 - a) * (k / n));
      }
      m.weights.push_back(1.0);
      return m;
    case WeightKind::lite_dmd_heavy_core:
      m.geometry = LayeredMedium::Geometry::l1_shells;
      for (int k = 1; k <= shells; ++k) {
        const double r = k / n;
        m.interfaces.push_back(r);
        m.weights.push_back(r <= 0.5 ? 0.75 - 0.5 * r : r);
      }
      m.weights.push_back(1.0);
      return m;
    case WeightKind::custom_piecewise:
      if (w.name() == "interpolated_layers") {
        const double z1 = w.pieces()[0].constraints[0].shape.offset;
        const double z2 = w.pieces()[1].constraints[1].shape.offset;
        const double w1 = w.pieces()[0].weight.constant;
        const double w2 = w.fallback().constant;
        m.interfaces.push_back(z1);
        m.weights.push_back(w1);
        for (int k = 1; k <= shells; ++k) {
          m.interfaces.push_back(z1 + (z2 - z1) * (k / n));
          m.weights.push_back(w1 + (w2 - w1) * (k / n));
        }
        m.weights.push_back(w2);
        return m;
      }
      break;
    default:
      break;
  }
  throw SolverError("weight '" + w.name() + "' has no layered description; use the grid oracle");
}

StopPredicate stop_at_unit_circle() {
  return [](Point a, Point b) -> std::optional<double> {
    const Vec d = b - a;
    const double qa = dot(d, d), qb = 2.0 * dot(a, d), qc = dot(a, a) - 1.0;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (qa == 0.0 || disc < 0.0) return std::nullopt;
    const double root = std::sqrt(disc);
    for (double s : {(-qb - root) / (2.0 * qa), (-qb + root) / (2.0 * qa)}) {
      // Only exits through the circle count.
      if (s > 0.0 && s <= 1.0 && dot(a + s * d, d) > 0.0) return s;
    }
    return std::nullopt;
  };
}

StopPredicate stop_at_line(Vec normal, double offset) {
  return [normal, offset](Point a, Point b) -> std::optional<double> {
    const double fa = dot(normal, a) - offset, fb = dot(normal, b) - offset;
    if (fa == 0.0 || fa * fb > 0.0 || fa == fb) return std::nullopt;
    const double s = fa / (fa - fb);
    if (s > 0.0 && s <= 1.0) return s;
    return std::nullopt;
  };
}

StopPredicate stop_at_y_axis() { return stop_at_line({1.0, 0.0}, 0.0); }

StopPredicate stop_at_l1_level(double radius) {
  return [radius](Point a, Point b) -> std::optional<double> {
    // |p|_1 is piecewise linear along the segment; split at axis crossings.
    const Vec d = b - a;
    std::array<double, 4> cuts{0.0, 1.0, 1.0, 1.0};
    int n = 1;
    if (d.x != 0.0) {
      const double s = -a.x / d.x;
      if (s > 0.0 && s < 1.0) cuts[n++] = s;
    }
    if (d.y != 0.0) {
      const double s = -a.y / d.y;
      if (s > 0.0 && s < 1.0) cuts[n++] = s;
    }
    cuts[n++] = 1.0;
    std::sort(cuts.begin(), cuts.begin() + n);
    const double f0 = l1_norm(a) - radius;
    for (int i = 0; i + 1 < n; ++i) {
      const double s0 = cuts[i], s1 = cuts[i + 1];
      if (!(s1 > s0)) continue;
      const double g0 = l1_norm(a + s0 * d) - radius, g1 = l1_norm(a + s1 * d) - radius;
      if (g1 == 0.0 && f0 != 0.0) return s1;
      if (g0 * g1 < 0.0) return s0 + (s1 - s0) * g0 / (g0 - g1);
    }
    return std::nullopt;
  };
}

namespace {

// Time along p + tau d at which the coordinate reaches `target` while moving
// in direction `sense` (+1 increasing, -1 decreasing).
double time_to_level(const LayeredMedium& m, Point p, Vec d, double target, int sense) {
  switch (m.geometry) {
    case LayeredMedium::Geometry::horizontal: {
      const double rate = -d.y;
      if (rate * sense <= 0.0) return kInf;
      return std::max(0.0, (target - (-p.y)) / rate);
    }
    case LayeredMedium::Geometry::l1_shells: {
      // Piecewise linear between axis crossings.
      std::array<double, 4> cuts{0.0, kInf, kInf, kInf};
      int n = 1;
      if (d.x != 0.0 && -p.x / d.x > 0.0) cuts[n++] = -p.x / d.x;
      if (d.y != 0.0 && -p.y / d.y > 0.0) cuts[n++] = -p.y / d.y;
      std::sort(cuts.begin() + 1, cuts.begin() + n);
      cuts[n] = kInf;
      for (int i = 0; i < n; ++i) {
        const double t0 = cuts[i], t1 = cuts[i + 1];
        const double probe = std::isfinite(t1) ? 0.5 * (t0 + t1) : t0 + 1.0;
        const Point mid = p + probe * d;
        const double sx = mid.x > 0.0 ? 1.0 : (mid.x < 0.0 ? -1.0 : 0.0);
        const double sy = mid.y > 0.0 ? 1.0 : (mid.y < 0.0 ? -1.0 : 0.0);
        const double rate = sx * d.x + sy * d.y;
        if (rate * sense <= 0.0) continue;
        const double c0 = l1_norm(p + t0 * d);
        const double tau = t0 + (target - c0) / rate;
        if (tau >= t0 && tau <= t1) return tau;
        if (tau < t0 && (target - c0) * sense <= 0.0 && i == 0) return t0;
      }
      return kInf;
    }
    case LayeredMedium::Geometry::l2_shells: {
      const double qb = 2.0 * dot(p, d), qc = dot(p, p) - target * target;
      const double disc = qb * qb - 4.0 * qc;
      if (disc < 0.0) return kInf;
      const double root = std::sqrt(disc);
      const double t_in = (-qb - root) / 2.0, t_out = (-qb + root) / 2.0;
      if (sense > 0) return t_out > 0.0 ? t_out : kInf;        // leaving the ball
      return t_in > 0.0 ? t_in : kInf;                          // entering the ball
    }
  }
  return kInf;
}

double angle_from_normal(Vec d, Vec n) {
  return std::atan2(std::abs(cross(n, d)), std::abs(dot(n, d)));
}

}  // namespace

TraceResult trace_layered_ray(const LayeredMedium& medium, Point start, double theta_0,
                              const StopPredicate& stop, int max_segments) {
  Vec n = medium.normal(start, {1.0, 1.0});
  if (medium.geometry == LayeredMedium::Geometry::l1_shells) {
    // Resolve the quadrant from the launch direction itself on the axes.
    const Vec t0{n.y, -n.x};
    const Vec guess = std::cos(theta_0) * n + std::sin(theta_0) * t0;
    n = medium.normal(start, guess);
  }
  const Vec t{n.y, -n.x};
  return trace_layered_ray_dir(medium, start, std::cos(theta_0) * n + std::sin(theta_0) * t, stop,
                               max_segments);
}

TraceResult trace_layered_ray_dir(const LayeredMedium& medium, Point start, Vec direction,
                                  const StopPredicate& stop, int max_segments) {
  if (!std::isfinite(start.x) || !std::isfinite(start.y)) throw std::invalid_argument("start must be finite");
  Vec d = normalized(direction);
  const auto& r = medium.interfaces;
  const auto& wt = medium.weights;
  const int n_layers = static_cast<int>(wt.size());

  std::vector<Point> pts{start};
  TraceResult out;

  auto refract = [&](Point at, int from, int to) {
    Vec nn = medium.normal(at, d);
    if (dot(nn, d) < 0.0) nn = -1.0 * nn;
    const double ratio = wt[static_cast<std::size_t>(from)] / wt[static_cast<std::size_t>(to)];
    const Vec tang = d - dot(d, nn) * nn;
    const double s_out = ratio * norm(tang);
    if (s_out > 1.0) {
      const int iface = std::max(from, to);
      std::ostringstream os;
      os << "total internal reflection at interface " << iface << " (coordinate "
         << r[static_cast<std::size_t>(iface - 1)] << ")";
      throw TotalInternalReflection(iface, os.str());
    }
    d = normalized(ratio * tang + std::sqrt(std::max(0.0, 1.0 - s_out * s_out)) * nn);
    return angle_from_normal(d, nn);
  };

  // Locate the starting layer, refracting first when starting on an interface.
  const double c0 = medium.coordinate(start);
  int layer = medium.layer_of(c0);
  int on_iface = -1;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (std::abs(c0 - r[i]) <= 1e-13 * std::max(1.0, std::abs(r[i]))) on_iface = static_cast<int>(i);
  }
  if (on_iface >= 0) {
    const Vec nn = medium.normal(start, d);
    const double along = dot(d, nn);
    if (along > 0.0) {
      layer = on_iface + 1;
      out.angles.push_back(refract(start, on_iface, layer));
    } else if (along < 0.0) {
      layer = on_iface;
      out.angles.push_back(refract(start, on_iface + 1, layer));
    } else {
      layer = on_iface + 1;
      out.angles.push_back(std::numbers::pi / 2);
    }
  } else {
    out.angles.push_back(angle_from_normal(d, medium.normal(start, d)));
  }

  Point p = start;
  for (int seg = 0; seg < max_segments; ++seg) {
    const double lo = layer > 0 ? r[static_cast<std::size_t>(layer - 1)] : -kInf;
    const double hi = layer < n_layers - 1 ? r[static_cast<std::size_t>(layer)] : kInf;
    const double t_hi = std::isfinite(hi) ? time_to_level(medium, p, d, hi, +1) : kInf;
    const double t_lo = std::isfinite(lo) ? time_to_level(medium, p, d, lo, -1) : kInf;
    const double t_hit = std::min(t_hi, t_lo);
    const double reach = std::isfinite(t_hit) ? t_hit : kFar;
    const Point q = p + reach * d;
    out.layers.push_back(layer);
    if (auto s = stop(p, q)) {
      const Point end = p + (*s * reach) * d;
      if (!(end == pts.back())) pts.push_back(end);
      out.final_state = {end, d, layer};
      out.path = Polyline(std::move(pts));
      return out;
    }
    if (!std::isfinite(t_hit)) break;
    if (!(q == pts.back())) pts.push_back(q);
    p = q;
    const int next = t_hi <= t_lo ? layer + 1 : layer - 1;
    out.angles.push_back(refract(p, layer, next));
    layer = next;
  }
  throw SolverError("ray did not reach the stop condition within the segment budget");
}

// ---------------------------------------------------------------------------
// Two-point shooting

namespace {

struct Candidate {
  std::vector<Point> vertices;
  double cost = kInf;
  double side = 0.0;  // mean offset of interior vertices to the left of a->b
};

double path_cost(const WeightField& w, const std::vector<Point>& v) {
  double c = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) c += w.segment_integral(v[i], v[i + 1]);
  return c;
}

double path_side(const std::vector<Point>& v, Point a, Vec left) {
  if (v.size() <= 2) return 0.0;
  double s = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) s += dot(v[i] - a, left);
  return s / static_cast<double>(v.size() - 2);
}

std::vector<Point> dedupe(std::vector<Point> v) {
  std::vector<Point> out;
  for (const Point& p : v) {
    if (out.empty() || distance(out.back(), p) > 1e-15) out.push_back(p);
  }
  return out;
}

}  // namespace

Polyline shoot_two_point(const WeightField& w, Point a, Point b, double tol, Branch branch) {
  if (a == b) throw std::invalid_argument("shoot_two_point needs distinct endpoints");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const LayeredMedium medium = layered_medium_of(w);
  const Vec u = normalized(b - a);
  const Vec left{-u.y, u.x};
  const StopPredicate stop = stop_at_line(u, dot(u, b));

  struct Shot {
    bool ok = false;
    double miss = 0.0;
    std::vector<Point> vertices;
  };
  auto shoot = [&](double phi) {
    Shot s;
    try {
      TraceResult tr = trace_layered_ray_dir(medium, a, std::cos(phi) * u + std::sin(phi) * left, stop, 100000);
      s.ok = true;
      s.miss = dot(tr.final_state.position - b, left);
      s.vertices.assign(tr.path.vertices().begin(), tr.path.vertices().end());
    } catch (const SolverError&) {
      s.ok = false;
    }
    return s;
  };

  std::vector<Candidate> candidates;
  constexpr int kScan = 2048;
  std::vector<Shot> scan(kScan);
  std::vector<double> phis(kScan);
  for (int k = 0; k < kScan; ++k) {
    phis[static_cast<std::size_t>(k)] = -std::numbers::pi / 2 + (k + 0.5) * std::numbers::pi / kScan;
    scan[static_cast<std::size_t>(k)] = shoot(phis[static_cast<std::size_t>(k)]);
  }
  for (int k = 0; k + 1 < kScan; ++k) {
    const Shot& s0 = scan[static_cast<std::size_t>(k)];
    const Shot& s1 = scan[static_cast<std::size_t>(k + 1)];
    if (!s0.ok || !s1.ok) continue;
    if ((s0.miss > 0.0) == (s1.miss > 0.0) && s0.miss != 0.0 && s1.miss != 0.0) continue;
    double lo = phis[static_cast<std::size_t>(k)], hi = phis[static_cast<std::size_t>(k + 1)];
    double m_lo = s0.miss;
    Shot best = std::abs(s0.miss) < std::abs(s1.miss) ? s0 : s1;
    for (int it = 0; it < 200 && std::abs(best.miss) > tol && hi - lo > 1e-17; ++it) {
      const double mid = 0.5 * (lo + hi);
      Shot sm = shoot(mid);
      if (!sm.ok) break;
      if (std::abs(sm.miss) < std::abs(best.miss)) best = sm;
      if ((sm.miss > 0.0) == (m_lo > 0.0)) {
        lo = mid;
        m_lo = sm.miss;
      } else {
        hi = mid;
      }
    }
    if (!best.ok || std::abs(best.miss) > tol) continue;  // a jump, not a root
    best.vertices.back() = b;
    Candidate c;
    c.vertices = dedupe(std::move(best.vertices));
    if (c.vertices.size() < 2) continue;
    c.cost = path_cost(w, c.vertices);
    c.side = path_side(c.vertices, a, left);
    candidates.push_back(std::move(c));
  }

  if (w.is_piecewise_constant()) {
    for (const Point& corner : w.corners()) {
      if (distance(corner, a) < 1e-12 || distance(corner, b) < 1e-12) continue;
      Candidate c;
      c.vertices = {a, corner, b};
      c.cost = path_cost(w, c.vertices);
      c.side = path_side(c.vertices, a, left);
      candidates.push_back(std::move(c));
    }
  }
  if (candidates.empty()) throw SolverError("no launch angle reaches the target; use the grid oracle");

  const double sign = branch == Branch::minimal ? 1.0 : -1.0;
  const Candidate* best = &candidates.front();
  for (const Candidate& c : candidates) {
    const double scale = 1e-12 * (1.0 + std::abs(best->cost));
    if (c.cost < best->cost - scale || (std::abs(c.cost - best->cost) <= scale && sign * c.side > sign * best->side)) {
      best = &c;
    }
  }
  const double straight = w.segment_integral(a, b);
  if (best->cost > straight + 1e-9) {
    std::ostringstream os;
    os.precision(17);
    os << "shooting result (" << best->cost << ") is longer than the straight segment (" << straight << ")";
    throw SolverError(os.str());
  }
  return Polyline(best->vertices);
}

// ---------------------------------------------------------------------------
// Closed-form quantities

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                        double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace

double H_of(double t0) {
  if (!(t0 > 0.0 && t0 < 1.0)) throw std::invalid_argument("H_of needs 0 < t0 < 1");
  const double c = 1.0 + t0;
  auto f = [c](double t) {
    const double q = 1.0 + t;
    return 1.0 - c / std::sqrt(2.0 * q * q - c * c);
  };
  const double fa = f(t0), fb = f(1.0), fm = f(0.5 * (t0 + 1.0));
  const double whole = simpson(t0, 1.0, fa, fm, fb);
  return 0.5 * adaptive_simpson(f, t0, 1.0, fa, fm, fb, whole, 1e-9, 40);
}

double H_discrete(int n, int k0) {
  if (n < 1 || k0 < 0 || k0 > n) throw std::invalid_argument("H_discrete needs 0 <= k0 <= n, n >= 1");
  const double dn = n;
  const double c = 1.0 + k0 / dn;
  double sum = 0.0;
  for (int k = k0 + 1; k <= n; ++k) {
    const double q = 1.0 + k / dn;
    sum += (1.0 - c / std::sqrt(2.0 * q * q - c * c)) / (2.0 * dn);
  }
  return sum;
}

double heavy_disk_arc_slack(double alpha, double theta) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(theta > 0.0 && theta <= std::numbers::pi)) throw std::invalid_argument("theta must lie in (0, pi]");
  return 2.0 * alpha * std::sin(0.5 * theta) - theta;
}

bool heavy_disk_arc_test(double alpha, double theta) {
  return heavy_disk_arc_slack(alpha, theta) >= -1e-12 * theta;
}

}  // namespace lgl
