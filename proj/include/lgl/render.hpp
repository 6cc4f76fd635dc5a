#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lgl/analysis.hpp"
#include "lgl/geometry.hpp"
#include "lgl/stacker.hpp"

namespace lgl {

/// Plain PGM (P2), maxval 65535, u mapped linearly from [0, 2]; first line
/// of samples is the top row (largest y). LF line endings.
std::string render_pgm(const GridField& field);

/// SVG 1.1 contour plot: the unit circle plus one path per level curve,
/// grey by level, 6-decimal coordinates, y flipped by one group transform.
std::string render_svg(const std::vector<LevelCurve>& curves);

/// CSV "level,x,y" with one row per curve vertex, 9 significant digits.
std::string render_curves_csv(const std::vector<LevelCurve>& curves);

/// CSV "x,y" of a single polyline.
std::string render_polyline_csv(const Polyline& path);

/// CSV "label,value,expected,tolerance,pass"; the label carries the
/// comparison mode in brackets.
std::string render_report_csv(const ExperimentReport& report);

/// Writes bytes verbatim, creating parent directories. Throws
/// std::runtime_error on I/O failure.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace lgl
