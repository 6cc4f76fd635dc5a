#include "lgl/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "lgl/error.hpp"

namespace lgl {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

double to_double(std::string_view s, std::string_view what) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError(std::string(what) + ": '" + std::string(s) + "' is not a finite number");
  }
  return v;
}

template <class Int>
Int to_int(std::string_view s, std::string_view what) {
  s = trim(s);
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError(std::string(what) + ": '" + std::string(s) + "' is not an integer in range");
  }
  return v;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Point parse_point(std::string_view s, std::string_view what) {
  const auto w = words(s);
  if (w.size() != 2) throw ConfigError(std::string(what) + " needs two numbers 'x y'");
  return {to_double(w[0], what), to_double(w[1], what)};
}

AffineWeight parse_affine(std::string_view s, std::string_view what) {
  const auto w = words(s);
  if (w.empty() || w.size() == 3 || w.size() == 5 || w.size() > 6) {
    throw ConfigError(std::string(what) + " needs 'c [l1_slope [cx cy [gx gy]]]'");
  }
  AffineWeight a;
  a.constant = to_double(w[0], what);
  if (w.size() >= 2) a.l1_slope = to_double(w[1], what);
  if (w.size() >= 4) a.l1_center = {to_double(w[2], what), to_double(w[3], what)};
  if (w.size() == 6) a.gradient = {to_double(w[4], what), to_double(w[5], what)};
  return a;
}

std::string format_affine(const AffineWeight& a) {
  std::string s = num(a.constant);
  if (a.l1_slope == 0.0 && a.l1_center == Point{} && a.gradient == Vec{}) return s;
  s += " " + num(a.l1_slope);
  if (a.l1_center == Point{} && a.gradient == Vec{}) return s;
  s += " " + num(a.l1_center.x) + " " + num(a.l1_center.y);
  if (a.gradient == Vec{}) return s;
  return s + " " + num(a.gradient.x) + " " + num(a.gradient.y);
}

Constraint parse_constraint(std::string_view s) {
  const auto w = words(s);
  if (w.size() != 5 || (w[4] != "in" && w[4] != "out")) {
    throw ConfigError("constraint '" + std::string(s) + "' needs 'l1|l2|half a b c in|out'");
  }
  const double a = to_double(w[1], "constraint"), b = to_double(w[2], "constraint"), c = to_double(w[3], "constraint");
  Constraint out;
  out.inside = w[4] == "in";
  if (w[0] == "l1" || w[0] == "l2") {
    if (!(c > 0.0)) throw ConfigError("ball radius must be positive");
    out.shape = w[0] == "l1" ? Shape::l1_ball({a, b}, c) : Shape::l2_ball({a, b}, c);
  } else if (w[0] == "half") {
    if (a == 0.0 && b == 0.0) throw ConfigError("half-plane normal must be nonzero");
    out.shape = Shape::half_plane({a, b}, c);
  } else {
    throw ConfigError("unknown constraint shape '" + std::string(w[0]) + "'");
  }
  return out;
}

std::string format_constraint(const Constraint& c) {
  const Shape& s = c.shape;
  std::string out;
  switch (s.kind) {
    case Shape::Kind::l1_ball: out = "l1 " + num(s.center.x) + " " + num(s.center.y) + " " + num(s.radius); break;
    case Shape::Kind::l2_ball: out = "l2 " + num(s.center.x) + " " + num(s.center.y) + " " + num(s.radius); break;
    case Shape::Kind::half_plane: out = "half " + num(s.normal.x) + " " + num(s.normal.y) + " " + num(s.offset); break;
  }
  return out + (c.inside ? " in" : " out");
}

Piece parse_piece(std::string_view s) {
  const auto parts = split(s, '|');
  if (parts.size() != 3) throw ConfigError("piece needs 'region | constraints | affine'");
  Piece p;
  p.region = std::string(parts[0]);
  if (p.region.empty() || p.region.find_first_of(" \t,#") != std::string::npos) {
    throw ConfigError("piece region must be a single word");
  }
  if (!parts[1].empty()) {
    for (std::string_view c : split(parts[1], ',')) p.constraints.push_back(parse_constraint(c));
  }
  p.weight = parse_affine(parts[2], "piece weight");
  return p;
}

std::string format_piece(const Piece& p) {
  std::string s = p.region + " | ";
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    if (i > 0) s += ", ";
    s += format_constraint(p.constraints[i]);
  }
  return s + " | " + format_affine(p.weight);
}

std::vector<Layer> parse_layers(std::string_view s) {
  std::vector<Layer> out;
  for (std::string_view item : split(s, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) throw ConfigError("layers need 'depth:weight' items");
    out.push_back({to_double(item.substr(0, colon), "layer depth"), to_double(item.substr(colon + 1), "layer weight")});
  }
  return out;
}

const std::vector<std::string_view>& known_keys() {
  static const std::vector<std::string_view> keys{"weight", "alpha", "layers", "piece", "default_weight",
                                                  "res",    "levels", "switch", "out",   "experiment",
                                                  "seed",   "from",  "to"};
  return keys;
}

}  // namespace

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "weight") {
    const auto& cat = weight_catalog();
    if (std::none_of(cat.begin(), cat.end(), [&](const CatalogEntry& e) { return e.name == value; })) {
      throw ConfigError("unknown weight '" + std::string(value) + "'");
    }
    cfg.weight = std::string(value);
  } else if (key == "alpha") {
    cfg.alpha = to_double(value, "alpha");
  } else if (key == "layers") {
    cfg.layers = parse_layers(value);
  } else if (key == "piece") {
    cfg.pieces.push_back(parse_piece(value));
  } else if (key == "default_weight") {
    cfg.default_weight = parse_affine(value, "default_weight");
  } else if (key == "res") {
    const int v = to_int<int>(value, "res");
    if (v < 16 || v > 4096) throw ConfigError("res must lie in 16..4096");
    cfg.resolution = v;
  } else if (key == "levels") {
    const int v = to_int<int>(value, "levels");
    if (v < 16 || v > 100000) throw ConfigError("levels must lie in 16..100000");
    cfg.levels = v;
  } else if (key == "switch") {
    const double v = to_double(value, "switch");
    if (v < 0.0 || v > 2.0) throw ConfigError("switch must lie in [0, 2]");
    cfg.switch_level = v;
  } else if (key == "out") {
    if (value.empty()) throw ConfigError("out must not be empty");
    cfg.out = std::string(value);
  } else if (key == "experiment") {
    if (value.empty() || value.find_first_of(" \t") != std::string_view::npos) {
      throw ConfigError("experiment must be a single word");
    }
    cfg.experiment = std::string(value);
  } else if (key == "seed") {
    cfg.seed = to_int<std::uint64_t>(value, "seed");
  } else if (key == "from") {
    cfg.from = parse_point(value, "from");
  } else if (key == "to") {
    cfg.to = parse_point(value, "to");
  } else {
    throw ConfigError("unknown key '" + std::string(key) + "'");
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    try {
      if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'");
      const std::string_view key = trim(line.substr(0, eq));
      if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end()) {
        throw ConfigError("unknown key '" + std::string(key) + "'");
      }
      if (key != "piece" && !seen.emplace(key).second) throw ConfigError("key '" + std::string(key) + "' repeated");
      apply_setting(cfg, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
  std::string s;
  s += "weight = " + cfg.weight + "\n";
  if (cfg.alpha) s += "alpha = " + num(*cfg.alpha) + "\n";
  if (!cfg.layers.empty()) {
    s += "layers = ";
    for (std::size_t i = 0; i < cfg.layers.size(); ++i) {
      if (i > 0) s += ", ";
      s += num(cfg.layers[i].depth) + ":" + num(cfg.layers[i].weight);
    }
    s += "\n";
  }
  for (const Piece& p : cfg.pieces) s += "piece = " + format_piece(p) + "\n";
  if (!(cfg.default_weight == AffineWeight{})) s += "default_weight = " + format_affine(cfg.default_weight) + "\n";
  s += "res = " + std::to_string(cfg.resolution) + "\n";
  s += "levels = " + std::to_string(cfg.levels) + "\n";
  s += "switch = " + num(cfg.switch_level) + "\n";
  s += "out = " + cfg.out + "\n";
  s += "experiment = " + cfg.experiment + "\n";
  s += "seed = " + std::to_string(cfg.seed) + "\n";
  s += "from = " + num(cfg.from.x) + " " + num(cfg.from.y) + "\n";
  s += "to = " + num(cfg.to.x) + " " + num(cfg.to.y) + "\n";
  return s;
}

void validate(const RunConfig& cfg) {
  const bool layered = cfg.weight == "layered_horizontal";
  const bool custom = cfg.weight == "custom_piecewise";
  if (!cfg.layers.empty() && !layered) throw ConfigError("layers only apply to layered_horizontal");
  if (layered && cfg.layers.empty()) throw ConfigError("layered_horizontal needs layers");
  if (!cfg.pieces.empty() && !custom) throw ConfigError("piece only applies to custom_piecewise");
  if (!(cfg.default_weight == AffineWeight{}) && !custom) {
    throw ConfigError("default_weight only applies to custom_piecewise");
  }
  if (custom && cfg.pieces.empty()) throw ConfigError("custom_piecewise needs at least one piece");
  if ((layered || custom) && cfg.alpha) throw ConfigError(cfg.weight + " takes no alpha");
}

WeightField build_weight(const RunConfig& cfg) {
  validate(cfg);
  try {
    if (cfg.weight == "layered_horizontal") return WeightField::layered_horizontal(cfg.layers);
    if (cfg.weight == "custom_piecewise") return WeightField::custom_piecewise(cfg.pieces, cfg.default_weight);
    return WeightField::from_name(cfg.weight, cfg.alpha);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids{
      "heavy_diamond_a",      "heavy_diamond_b",        "heavy_disk",
      "light_diamond",        "light_diamond_tight",    "three_heavy_diamonds_top",
      "three_heavy_diamonds_bottom", "lite_dmd_heavy_core_min", "lite_dmd_heavy_core_max"};
  return ids;
}

RunConfig figure_preset(std::string_view id) {
  RunConfig cfg;
  if (id == "heavy_diamond_a") {
    cfg.weight = "heavy_diamond";
    cfg.alpha = 2.0;
  } else if (id == "heavy_diamond_b") {
    cfg.weight = "heavy_diamond";
    cfg.alpha = std::sqrt(1.5);
  } else if (id == "heavy_disk") {
    cfg.weight = "heavy_disk";
    cfg.alpha = 2.0;
  } else if (id == "light_diamond" || id == "light_diamond_tight") {
    cfg.weight = std::string(id);
    cfg.alpha = 0.5;
  } else if (id == "three_heavy_diamonds_top" || id == "three_heavy_diamonds_bottom") {
    cfg.weight = "three_heavy_diamonds";
    cfg.alpha = std::sqrt(2.0);
    cfg.switch_level = id == "three_heavy_diamonds_top" ? 0.0 : 2.0;
  } else if (id == "lite_dmd_heavy_core_min" || id == "lite_dmd_heavy_core_max") {
    cfg.weight = "lite_dmd_heavy_core";
    cfg.switch_level = id == "lite_dmd_heavy_core_min" ? 0.0 : 2.0;
  } else {
    throw ConfigError("unknown figure '" + std::string(id) + "'");
  }
  return cfg;
}

}  // namespace lgl
