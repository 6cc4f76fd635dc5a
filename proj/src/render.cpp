#include "lgl/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace lgl {

namespace {

// Negative zero would make otherwise identical files differ.
double unsigned_zero(double v) { return v == 0.0 ? 0.0 : v; }

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", unsigned_zero(v));
  if (std::string_view(buf) == "-0.000000") return "0.000000";
  return buf;
}

std::string sig9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", unsigned_zero(v));
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string render_pgm(const GridField& field) {
  std::string s = "P2\n" + std::to_string(field.res) + " " + std::to_string(field.res) + "\n65535\n";
  s.reserve(s.size() + static_cast<std::size_t>(field.res) * field.res * 6);
  for (int j = field.res - 1; j >= 0; --j) {
    for (int i = 0; i < field.res; ++i) {
      const double u = std::clamp(field.at(i, j), 0.0, 2.0);
      const long v = std::lround(u / 2.0 * 65535.0);
      if (i > 0) s += ' ';
      s += std::to_string(v);
    }
    s += '\n';
  }
  return s;
}

std::string render_svg(const std::vector<LevelCurve>& curves) {
  std::string s =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"800\" "
      "viewBox=\"-1.05 -1.05 2.1 2.1\">\n"
      "<g transform=\"scale(1,-1)\">\n"
      "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"black\" stroke-width=\"0.006\"/>\n";
  for (const LevelCurve& c : curves) {
    const int grey = static_cast<int>(std::lround(std::clamp(c.level() / 2.0, 0.0, 1.0) * 200.0));
    char colour[32];
    std::snprintf(colour, sizeof colour, "rgb(%d,%d,%d)", grey, grey, grey);
    s += "<path fill=\"none\" stroke=\"";
    s += colour;
    s += "\" stroke-width=\"0.003\" d=\"";
    bool first = true;
    for (Point p : c.path().vertices()) {
      s += first ? "M" : " L";
      s += fixed6(p.x) + " " + fixed6(p.y);
      first = false;
    }
    s += "\"/>\n";
  }
  s += "</g>\n</svg>\n";
  return s;
}

std::string render_curves_csv(const std::vector<LevelCurve>& curves) {
  std::string s = "level,x,y\n";
  for (const LevelCurve& c : curves) {
    const std::string level = sig9(c.level());
    for (Point p : c.path().vertices()) s += level + "," + sig9(p.x) + "," + sig9(p.y) + "\n";
  }
  return s;
}

std::string render_polyline_csv(const Polyline& path) {
  std::string s = "x,y\n";
  for (Point p : path.vertices()) s += sig9(p.x) + "," + sig9(p.y) + "\n";
  return s;
}

std::string render_report_csv(const ExperimentReport& report) {
  std::string s = "label,value,expected,tolerance,pass\n";
  for (const Quantity& q : report.quantities) {
    const std::string label = q.label + " [" + std::string(to_string(q.check)) + "]";
    s += csv_field(label) + "," + sig9(q.value) + "," + sig9(q.expected) + "," + sig9(q.tolerance) + "," +
         (q.pass ? "true" : "false") + "\n";
  }
  return s;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace lgl
