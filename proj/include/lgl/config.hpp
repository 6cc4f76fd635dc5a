#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lgl/geometry.hpp"
#include "lgl/weight_field.hpp"

namespace lgl {

/// Run configuration. Text form: one `key = value` per line, '#' starts a
/// comment, blank lines ignored. Keys other than `piece` may appear once.
///
///   weight         catalog name (see `lgl catalog`)
///   alpha          parameter of the catalog entry (optional)
///   layers         layered_horizontal: depth:weight, depth:weight, ...
///   piece          custom_piecewise, repeatable:
///                    region | constraint, constraint, ... | affine
///                  constraint: l1 cx cy r in|out, l2 cx cy r in|out,
///                              half nx ny offset in|out
///                  affine: c [l1_slope [cx cy [gx gy]]]
///   default_weight custom_piecewise fallback, same affine syntax
///   res            raster resolution, 16..4096
///   levels         number of uniform levels, 16..100000
///   switch         branch switch level t*, 0..2 (0 all minimal, 2 all maximal)
///   out            output directory
///   experiment     verify suite name or "all"
///   seed           random seed, unsigned 64-bit
///   from, to       geodesic endpoints "x y"
struct RunConfig {
  std::string weight = "constant";
  std::optional<double> alpha;
  std::vector<Layer> layers;
  std::vector<Piece> pieces;
  AffineWeight default_weight{};
  int resolution = 512;
  int levels = 401;
  double switch_level = 1.0;
  std::string out = "out";
  std::string experiment = "all";
  std::uint64_t seed = 1;
  Point from{-1.0, 0.0};
  Point to{1.0, 0.0};

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws ConfigError naming the line for syntax errors, unknown or
/// repeated keys and out-of-range values.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);
/// Canonical text; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& cfg);

/// Applies one `key = value` assignment (shared by the parser and the
/// command-line flags).
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Checks cross-key consistency (e.g. layers only with layered_horizontal).
void validate(const RunConfig& cfg);

WeightField build_weight(const RunConfig& cfg);

/// Preset configurations for the reference figures.
const std::vector<std::string>& figure_ids();
/// Throws ConfigError for an unknown id.
RunConfig figure_preset(std::string_view id);

}  // namespace lgl
