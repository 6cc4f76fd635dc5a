#include "lgl/weight_field.hpp"

#include <algorithm>
#include <array>
#include <numbers>
#include <sstream>

#include "lgl/error.hpp"

namespace lgl {

namespace {

constexpr double kInterfaceTolerance = 1e-13;
constexpr double kLimitProbe = 1e-7;
constexpr int kLimitDirections = 16;
constexpr int kMaxBreaks = 256;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

AffineWeight constant_weight(double c) { return AffineWeight{c, 0.0, {}, {}}; }

}  // namespace

std::string_view to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::constant: return "constant";
    case WeightKind::heavy_diamond: return "heavy_diamond";
    case WeightKind::heavy_disk: return "heavy_disk";
    case WeightKind::light_diamond: return "light_diamond";
    case WeightKind::light_diamond_tight: return "light_diamond_tight";
    case WeightKind::three_heavy_diamonds: return "three_heavy_diamonds";
    case WeightKind::lite_dmd_heavy_core: return "lite_dmd_heavy_core";
    case WeightKind::layered_horizontal: return "layered_horizontal";
    case WeightKind::custom_piecewise: return "custom_piecewise";
  }
  return "unknown";
}

double Shape::level(Point p) const {
  switch (kind) {
    case Kind::l1_ball: return l1_norm(p - center) - radius;
    case Kind::l2_ball: return norm(p - center) - radius;
    case Kind::half_plane: return dot(normal, p) - offset;
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Catalog constructors

WeightField WeightField::constant(double value) {
  require_positive(value, "constant weight");
  WeightField w;
  w.kind_ = WeightKind::constant;
  w.name_ = "constant";
  w.alpha_ = value;
  w.fallback_ = constant_weight(value);
  w.fallback_region_ = "plane";
  w.continuous_ = true;
  w.finalize();
  return w;
}

WeightField WeightField::heavy_diamond(double alpha) {
  require_positive(alpha, "alpha");
  WeightField w;
  w.kind_ = WeightKind::heavy_diamond;
  w.name_ = "heavy_diamond";
  w.alpha_ = alpha;
  w.pieces_ = {Piece{"K", {{Shape::l1_ball({0, 0}, 0.5), true}}, constant_weight(alpha)}};
  w.fallback_ = constant_weight(1.0);
  w.continuous_ = alpha == 1.0;
  w.finalize();
  return w;
}

WeightField WeightField::heavy_disk(double alpha) {
  require_positive(alpha, "alpha");
  WeightField w;
  w.kind_ = WeightKind::heavy_disk;
  w.name_ = "heavy_disk";
  w.alpha_ = alpha;
  w.pieces_ = {Piece{"K", {{Shape::l2_ball({0, 0}, 0.5), true}}, constant_weight(alpha)}};
  w.fallback_ = constant_weight(1.0);
  w.continuous_ = alpha == 1.0;
  w.finalize();
  return w;
}

WeightField WeightField::light_diamond(double alpha) {
  require_positive(alpha, "alpha");
  WeightField w;
  w.kind_ = WeightKind::light_diamond;
  w.name_ = "light_diamond";
  w.alpha_ = alpha;
  // alpha + (1 - alpha)/0.05 * (s - 0.5) on the annulus 0.5 < s <= 0.55.
  const double slope = (1.0 - alpha) / 0.05;
  w.pieces_ = {
      Piece{"K_in", {{Shape::l1_ball({0, 0}, 0.5), true}}, constant_weight(alpha)},
      Piece{"K_ann",
            {{Shape::l1_ball({0, 0}, 0.5), false}, {Shape::l1_ball({0, 0}, 0.55), true}},
            AffineWeight{alpha - 0.5 * slope, slope, {0, 0}, {}}},
  };
  w.fallback_ = constant_weight(1.0);
  w.fallback_region_ = "K_out";
  w.continuous_ = true;
  w.finalize();
  return w;
}

WeightField WeightField::light_diamond_tight(double alpha) {
  require_positive(alpha, "alpha");
  WeightField w;
  w.kind_ = WeightKind::light_diamond_tight;
  w.name_ = "light_diamond_tight";
  w.alpha_ = alpha;
  w.pieces_ = {Piece{"K", {{Shape::l1_ball({0, 0}, 1.0), true}},
                     AffineWeight{alpha, 1.0 - alpha, {0, 0}, {}}}};
  w.fallback_ = constant_weight(1.0);
  w.continuous_ = true;
  w.finalize();
  return w;
}

WeightField WeightField::three_heavy_diamonds(double alpha) {
  require_positive(alpha, "alpha");
  WeightField w;
  w.kind_ = WeightKind::three_heavy_diamonds;
  w.name_ = "three_heavy_diamonds";
  w.alpha_ = alpha;
  w.pieces_ = {
      Piece{"K_left", {{Shape::l1_ball({-0.5, 0}, 0.25), true}}, constant_weight(alpha)},
      Piece{"K_right", {{Shape::l1_ball({0.5, 0}, 0.25), true}}, constant_weight(alpha)},
      Piece{"K_mid", {{Shape::l1_ball({0, 0.25}, 0.125), true}}, constant_weight(alpha)},
  };
  w.fallback_ = constant_weight(1.0);
  w.continuous_ = alpha == 1.0;
  w.finalize();
  return w;
}

WeightField WeightField::lite_dmd_heavy_core() {
  WeightField w;
  w.kind_ = WeightKind::lite_dmd_heavy_core;
  w.name_ = "lite_dmd_heavy_core";
  w.pieces_ = {
      Piece{"K_in", {{Shape::l1_ball({0, 0}, 0.5), true}}, AffineWeight{0.75, -0.5, {0, 0}, {}}},
      Piece{"K_ann",
            {{Shape::l1_ball({0, 0}, 0.5), false}, {Shape::l1_ball({0, 0}, 1.0), true}},
            AffineWeight{0.0, 1.0, {0, 0}, {}}},
  };
  w.fallback_ = constant_weight(1.0);
  w.fallback_region_ = "K_out";
  w.continuous_ = true;
  w.finalize();
  return w;
}

WeightField WeightField::layered_horizontal(std::vector<Layer> layers) {
  if (layers.empty()) throw std::invalid_argument("layered weight needs at least one layer");
  double previous = 0.0;
  for (const Layer& l : layers) {
    require_positive(l.weight, "layer weight");
    if (!(l.depth > previous)) throw std::invalid_argument("layer depths must increase from 0");
    previous = l.depth;
  }
  WeightField w;
  w.kind_ = WeightKind::layered_horizontal;
  w.name_ = "layered_horizontal";
  w.layers_ = layers;
  // Layer k occupies -depth_k < y < -depth_{k-1}; the first extends upward and
  // the last downward without bound. Half-plane "inside" means -y < depth.
  const std::size_t n = layers.size();
  for (std::size_t k = 0; k < n; ++k) {
    Piece p;
    p.region = "layer_" + std::to_string(k + 1);
    if (k + 1 < n) p.constraints.push_back({Shape::half_plane({0, -1}, layers[k].depth), true});
    if (k > 0) p.constraints.push_back({Shape::half_plane({0, -1}, layers[k - 1].depth), false});
    p.weight = constant_weight(layers[k].weight);
    w.pieces_.push_back(std::move(p));
  }
  w.fallback_ = constant_weight(layers.back().weight);
  w.fallback_region_ = "layer_" + std::to_string(n);
  w.continuous_ = std::all_of(layers.begin(), layers.end(),
                              [&](const Layer& l) { return l.weight == layers.front().weight; });
  w.finalize();
  return w;
}

WeightField WeightField::custom_piecewise(std::vector<Piece> pieces, AffineWeight fallback,
                                          std::string fallback_region) {
  WeightField w;
  w.kind_ = WeightKind::custom_piecewise;
  w.name_ = "custom_piecewise";
  w.pieces_ = std::move(pieces);
  w.fallback_ = fallback;
  w.fallback_region_ = std::move(fallback_region);
  w.continuous_ = false;
  w.finalize();
  return w;
}

WeightField WeightField::interpolated_layers(double z1, double z2, double w1, double w2) {
  require_positive(w1, "w1");
  require_positive(w2, "w2");
  if (!(0.0 < z1 && z1 < z2)) throw std::invalid_argument("need 0 < z1 < z2");
  const double span = z2 - z1;
  std::vector<Piece> pieces{
      Piece{"layer_1", {{Shape::half_plane({0, -1}, z1), true}}, constant_weight(w1)},
      Piece{"ramp",
            {{Shape::half_plane({0, -1}, z1), false}, {Shape::half_plane({0, -1}, z2), true}},
            AffineWeight{(w1 * z2 - w2 * z1) / span, 0.0, {}, {0.0, (w1 - w2) / span}}},
  };
  WeightField w = custom_piecewise(std::move(pieces), constant_weight(w2), "layer_2");
  w.name_ = "interpolated_layers";
  w.continuous_ = true;
  return w;
}

WeightField WeightField::from_name(std::string_view name, std::optional<double> alpha) {
  auto check = [&](double lo, double hi, bool lo_open, bool hi_open, double fallback) {
    const double a = alpha.value_or(fallback);
    const bool lo_ok = lo_open ? a > lo : a >= lo;
    const bool hi_ok = hi_open ? a < hi : a <= hi;
    if (!std::isfinite(a) || !lo_ok || !hi_ok) {
      std::ostringstream os;
      os << "alpha=" << a << " outside the documented range of " << name;
      throw ConfigError(os.str());
    }
    return a;
  };
  const double inf = std::numeric_limits<double>::infinity();
  if (name == "constant") return constant(check(0, inf, true, true, 1.0));
  if (name == "heavy_diamond") return heavy_diamond(check(1, inf, true, true, std::sqrt(1.5)));
  if (name == "heavy_disk") return heavy_disk(check(std::numbers::pi / 2, inf, false, true, 2.0));
  if (name == "light_diamond") return light_diamond(check(0, 1, true, true, 0.5));
  if (name == "light_diamond_tight") return light_diamond_tight(check(0, 1, true, true, 0.5));
  if (name == "three_heavy_diamonds") {
    return three_heavy_diamonds(check(std::sqrt(2.0), inf, false, true, std::sqrt(2.0)));
  }
  if (name == "lite_dmd_heavy_core") {
    if (alpha) throw ConfigError("lite_dmd_heavy_core takes no parameter");
    return lite_dmd_heavy_core();
  }
  throw ConfigError("unknown catalog weight '" + std::string(name) + "'");
}

const std::vector<CatalogEntry>& weight_catalog() {
  static const std::vector<CatalogEntry> entries{
      {"constant", WeightKind::constant, "alpha > 0 (value), default 1",
       "Euclidean reference: level curves are horizontal chords"},
      {"heavy_diamond", WeightKind::heavy_diamond, "alpha > 1, default sqrt(3/2); tip regime for alpha >= 3/sqrt(5)",
       "Eye of Horus: jump at the tips of the central diamond"},
      {"heavy_disk", WeightKind::heavy_disk, "alpha >= pi/2, default 2",
       "geodesics hug the boundary arc of the heavy disk"},
      {"light_diamond", WeightKind::light_diamond, "0 < alpha < 1, default 1/2",
       "continuous weight, jump along the central horizontal segment"},
      {"light_diamond_tight", WeightKind::light_diamond_tight, "0 < alpha < 1, default 1/2",
       "jump set reaching the boundary along the x-axis"},
      {"three_heavy_diamonds", WeightKind::three_heavy_diamonds, "alpha >= sqrt(2), default sqrt(2)",
       "Third Eye: two distinct solutions between t0 ~ 1.017 and t1 ~ 1.127"},
      {"lite_dmd_heavy_core", WeightKind::lite_dmd_heavy_core, "no parameters",
       "continuous weight with non-unique solutions"},
      {"layered_horizontal", WeightKind::layered_horizontal, "layers = depth:weight,... (config only)",
       "Snell refraction through horizontal layers"},
      {"custom_piecewise", WeightKind::custom_piecewise, "piece = ... (config only)",
       "user-defined regions bounded by l1/l2 balls and half-planes"},
  };
  return entries;
}

// ---------------------------------------------------------------------------
// Evaluation

void WeightField::finalize() {
  shapes_.clear();
  piece_constraints_.clear();
  l1_centers_.clear();
  auto shape_index = [&](const Shape& s) {
    auto it = std::find(shapes_.begin(), shapes_.end(), s);
    if (it != shapes_.end()) return static_cast<int>(it - shapes_.begin());
    shapes_.push_back(s);
    return static_cast<int>(shapes_.size() - 1);
  };
  auto add_center = [&](Point c) {
    if (std::find(l1_centers_.begin(), l1_centers_.end(), c) == l1_centers_.end()) {
      l1_centers_.push_back(c);
    }
  };
  for (const Piece& p : pieces_) {
    std::vector<std::pair<int, bool>> cs;
    for (const Constraint& c : p.constraints) {
      if (c.shape.kind == Shape::Kind::l1_ball) require_positive(c.shape.radius, "l1 radius");
      if (c.shape.kind == Shape::Kind::l2_ball) require_positive(c.shape.radius, "l2 radius");
      cs.emplace_back(shape_index(c.shape), c.inside);
      if (c.shape.kind == Shape::Kind::l1_ball) add_center(c.shape.center);
    }
    piece_constraints_.push_back(std::move(cs));
    if (p.weight.l1_slope != 0.0) add_center(p.weight.l1_center);
  }
  if (fallback_.l1_slope != 0.0) add_center(fallback_.l1_center);
}

Point WeightField::to_base(Point p) const {
  return frame_angle_ == 0.0 ? p : rotate(p, frame_angle_);
}

int WeightField::strict_piece(Point p) const {
  std::array<double, 64> levels{};
  const std::size_t n = std::min<std::size_t>(shapes_.size(), levels.size());
  for (std::size_t k = 0; k < n; ++k) {
    levels[k] = shapes_[k].level(p);
    if (std::abs(levels[k]) <= kInterfaceTolerance) return -2;
  }
  for (std::size_t i = 0; i < piece_constraints_.size(); ++i) {
    bool ok = true;
    for (const auto& [idx, inside] : piece_constraints_[i]) {
      const double lv = static_cast<std::size_t>(idx) < n ? levels[idx] : shapes_[idx].level(p);
      if (inside ? !(lv < 0.0) : !(lv > 0.0)) {
        ok = false;
        break;
      }
    }
    if (ok) return static_cast<int>(i);
  }
  return -1;
}

int WeightField::limit_piece(Point p) const {
  const int strict = strict_piece(p);
  if (strict != -2) return strict;
  // On an interface: smallest one-sided limit over probe directions that
  // avoid the axis and diagonal directions of the region boundaries.
  int best = -1;
  double best_value = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kLimitDirections; ++k) {
    const double a = (k + 0.5) * 2.0 * std::numbers::pi / kLimitDirections;
    const Point q{p.x + kLimitProbe * std::cos(a), p.y + kLimitProbe * std::sin(a)};
    const int piece = strict_piece(q);
    if (piece == -2) continue;
    const double v = formula(piece)(p);
    if (v < best_value) {
      best_value = v;
      best = piece;
    }
  }
  return best;
}

double WeightField::eval(Point p) const {
  const Point q = to_base(p);
  return formula(limit_piece(q))(q);
}

std::string WeightField::region_of(Point p) const {
  const int piece = limit_piece(to_base(p));
  return piece < 0 ? fallback_region_ : pieces_[static_cast<std::size_t>(piece)].region;
}

WeightField WeightField::rotated(double angle) const {
  WeightField w = *this;
  w.frame_angle_ = std::remainder(frame_angle_ + angle, 2.0 * std::numbers::pi);
  return w;
}

double WeightField::segment_integral(Point a, Point b) const {
  if (frame_angle_ == 0.0) return base_segment_integral(a, b);
  return base_segment_integral(rotate(a, frame_angle_), rotate(b, frame_angle_));
}

double WeightField::base_segment_integral(Point a, Point b) const {
  const Vec d = b - a;
  const double len = norm(d);
  if (len == 0.0) return 0.0;
  if (pieces_.empty() && fallback_.is_constant()) return len * fallback_.constant;

  std::array<double, kMaxBreaks> s{};
  int n = 0;
  auto push = [&](double v) {
    if (v > 0.0 && v < 1.0) {
      if (n == kMaxBreaks) throw SolverError("segment crosses too many region interfaces");
      s[n++] = v;
    }
  };
  s[n++] = 0.0;
  s[n++] = 1.0;
  // The l1 distance to each center is affine between crossings of its axes.
  for (const Point& c : l1_centers_) {
    if (d.x != 0.0) push((c.x - a.x) / d.x);
    if (d.y != 0.0) push((c.y - a.y) / d.y);
  }
  std::sort(s.begin(), s.begin() + n);
  const int n_axis = n;

  for (const Shape& sh : shapes_) {
    switch (sh.kind) {
      case Shape::Kind::l1_ball:
        for (int i = 0; i + 1 < n_axis; ++i) {
          const double s0 = s[i], s1 = s[i + 1];
          if (!(s1 > s0)) continue;
          const double l0 = sh.level(a + s0 * d), l1 = sh.level(a + s1 * d);
          if ((l0 < 0.0 && l1 > 0.0) || (l0 > 0.0 && l1 < 0.0)) {
            push(s0 + (s1 - s0) * l0 / (l0 - l1));
          }
        }
        break;
      case Shape::Kind::l2_ball: {
        const Vec ac = a - sh.center;
        const double qa = dot(d, d), qb = 2.0 * dot(ac, d), qc = dot(ac, ac) - sh.radius * sh.radius;
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc > 0.0) {
          const double root = std::sqrt(disc);
          const double q = -0.5 * (qb + (qb >= 0.0 ? root : -root));
          if (q != 0.0) {
            push(q / qa);
            push(qc / q);
          }
        }
        break;
      }
      case Shape::Kind::half_plane: {
        const double nd = dot(sh.normal, d);
        if (nd != 0.0) push((sh.offset - dot(sh.normal, a)) / nd);
        break;
      }
    }
  }
  std::sort(s.begin(), s.begin() + n);

  double total = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    const double ds = s[i + 1] - s[i];
    if (!(ds > 0.0)) continue;
    const Point mid = a + (0.5 * (s[i] + s[i + 1])) * d;
    total += ds * formula(limit_piece(mid))(mid);
  }
  return total * len;
}

// ---------------------------------------------------------------------------
// Structural queries

bool WeightField::is_piecewise_constant() const {
  return fallback_.is_constant() &&
         std::all_of(pieces_.begin(), pieces_.end(), [](const Piece& p) { return p.weight.is_constant(); });
}

bool WeightField::symmetric_in_y() const {
  if (pieces_.empty() && fallback_.is_constant()) return true;
  if (frame_angle_ != 0.0) return false;
  switch (kind_) {
    case WeightKind::constant:
    case WeightKind::heavy_diamond:
    case WeightKind::heavy_disk:
    case WeightKind::light_diamond:
    case WeightKind::light_diamond_tight:
    case WeightKind::lite_dmd_heavy_core:
      return true;
    default:
      return false;
  }
}

double WeightField::lipschitz_bound() const {
  auto slope = [](const AffineWeight& f) { return std::abs(f.l1_slope) * std::numbers::sqrt2 + norm(f.gradient); };
  double best = slope(fallback_);
  for (const Piece& p : pieces_) best = std::max(best, slope(p.weight));
  return best;
}

std::vector<Point> WeightField::corners() const {
  std::vector<Point> out;
  for (const Shape& sh : shapes_) {
    if (sh.kind != Shape::Kind::l1_ball) continue;
    const Point c = sh.center;
    const double r = sh.radius;
    for (Point q : {Point{c.x + r, c.y}, Point{c.x, c.y + r}, Point{c.x - r, c.y}, Point{c.x, c.y - r}}) {
      out.push_back(frame_angle_ == 0.0 ? q : rotate(q, -frame_angle_));
    }
  }
  return out;
}

}  // namespace lgl
