// Command-line front end: catalog | geodesic | solve | verify | figure.
// Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 solver failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lgl/analysis.hpp"
#include "lgl/config.hpp"
#include "lgl/error.hpp"
#include "lgl/geodesic_oracle.hpp"
#include "lgl/geodesy.hpp"
#include "lgl/graph_geodesic.hpp"
#include "lgl/render.hpp"
#include "lgl/stacker.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;
constexpr int kSolverFailed = 3;

struct Flags {
  std::string config;
  std::vector<std::pair<std::string, std::string>> settings;  // key, value in command-line order
};

void add_setting_flag(CLI::App& app, Flags& flags, const std::string& key, const std::string& help) {
  std::string flag = "--" + key;
  for (char& c : flag) {
    if (c == '_') c = '-';
  }
  app.add_option_function<std::vector<std::string>>(
         flag,
         [&flags, key](const std::vector<std::string>& values) {
           for (const std::string& v : values) flags.settings.emplace_back(key, v);
         },
         help)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->trigger_on_parse()
      ->allow_extra_args(false);
}

lgl::RunConfig resolve(const Flags& flags, std::optional<lgl::RunConfig> base = std::nullopt) {
  lgl::RunConfig cfg = base ? *base : lgl::RunConfig{};
  if (!flags.config.empty()) cfg = lgl::load_config(flags.config);
  for (const auto& [key, value] : flags.settings) lgl::apply_setting(cfg, key, value);
  if (const char* env = std::getenv("LGL_OUT"); env != nullptr && *env != '\0') cfg.out = env;
  lgl::validate(cfg);
  return cfg;
}

int cmd_catalog() {
  for (const lgl::CatalogEntry& e : lgl::weight_catalog()) {
    std::printf("%-22s %s\n%-22s reproduces: %s\n", e.name.c_str(), e.parameters.c_str(), "", e.reproduces.c_str());
  }
  return kOk;
}

int cmd_geodesic(const lgl::RunConfig& cfg, const std::vector<std::string>& via, const std::string& method,
                 const std::string& branch_name) {
  const lgl::WeightField w = lgl::build_weight(cfg);
  const lgl::Branch branch = branch_name == "maximal" ? lgl::Branch::maximal : lgl::Branch::minimal;
  lgl::Polyline path;
  double length = 0.0;
  if (!via.empty()) {
    std::vector<lgl::Point> pts{cfg.from};
    for (const std::string& v : via) {
      lgl::RunConfig tmp;
      lgl::apply_setting(tmp, "from", v);
      pts.push_back(tmp.from);
    }
    pts.push_back(cfg.to);
    path = lgl::Polyline(std::move(pts));
    length = lgl::weighted_length(path, w);
  } else if (method == "shoot") {
    path = lgl::shoot_two_point(w, cfg.from, cfg.to, 1e-12, branch);
    length = lgl::weighted_length(path, w);
  } else if (method == "oracle") {
    lgl::OraclePath o = lgl::grid_shortest_path(w, cfg.resolution, cfg.from, cfg.to);
    path = std::move(o.path);
    length = o.cost;
  } else {
    path = lgl::graph_geodesic(w, cfg.from, cfg.to, branch);
    length = lgl::weighted_length(path, w);
  }
  const std::filesystem::path file = std::filesystem::path(cfg.out) / "geodesic.csv";
  lgl::write_file(file, lgl::render_polyline_csv(path));
  std::printf("length=%.17g\n", length);
  std::printf("wrote %s\n", file.string().c_str());
  return kOk;
}

int cmd_solve(const lgl::RunConfig& cfg, const std::string& stem) {
  const lgl::WeightField w = lgl::build_weight(cfg);
  lgl::StackOptions options;
  options.resolution = cfg.resolution;
  const lgl::SolutionStack s =
      lgl::stack(w, lgl::uniform_levels(cfg.levels), lgl::BranchPolicy{cfg.switch_level}, options);
  const std::filesystem::path dir(cfg.out);
  const std::filesystem::path pgm = dir / (stem + ".pgm");
  const std::filesystem::path svg = dir / (stem + ".svg");
  const std::filesystem::path csv = dir / (stem + "_curves.csv");
  lgl::write_file(pgm, lgl::render_pgm(s.field()));
  lgl::write_file(svg, lgl::render_svg(s.curves()));
  lgl::write_file(csv, lgl::render_curves_csv(s.curves()));
  std::printf("energy=%.9g\n", lgl::bv_energy(s));
  std::printf("nesting_margin=%.3g\n", lgl::nesting_margin(s.curves()));
  for (const auto& p : {pgm, svg, csv}) std::printf("wrote %s\n", p.string().c_str());
  return kOk;
}

int cmd_verify(const lgl::RunConfig& cfg) {
  std::vector<std::string> names;
  if (cfg.experiment == "all") {
    names = lgl::suite_names();
  } else {
    names.push_back(cfg.experiment);
  }
  std::vector<std::string> failing;
  for (const std::string& name : names) {
    const lgl::ExperimentReport rep = lgl::run_suite(name, cfg.seed);
    const std::filesystem::path file = std::filesystem::path(cfg.out) / ("verify_" + name + ".csv");
    lgl::write_file(file, lgl::render_report_csv(rep));
    std::printf("[%s]\n", name.c_str());
    for (const lgl::Quantity& q : rep.quantities) {
      std::printf("  %s %s: value=%.12g expected=%.12g tol=%.3g (%s)\n", q.pass ? "PASS" : "FAIL", q.label.c_str(),
                  q.value, q.expected, q.tolerance, std::string(lgl::to_string(q.check)).c_str());
      if (!q.pass) failing.push_back(name + ": " + q.label);
    }
    std::printf("  wrote %s\n", file.string().c_str());
  }
  if (!failing.empty()) {
    std::fprintf(stderr, "failing checks:\n");
    for (const std::string& f : failing) std::fprintf(stderr, "  %s\n", f.c_str());
    return kVerifyFailed;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Least-gradient functions on the weighted unit disk"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags flags;
  app.add_option("-c,--config", flags.config, "key = value configuration file")->check(CLI::ExistingFile);
  add_setting_flag(app, flags, "weight", "catalog weight name");
  add_setting_flag(app, flags, "alpha", "weight parameter");
  add_setting_flag(app, flags, "layers", "layered_horizontal layers 'depth:weight, ...'");
  add_setting_flag(app, flags, "piece", "custom_piecewise piece 'region | constraints | affine' (repeatable)");
  add_setting_flag(app, flags, "default_weight", "custom_piecewise fallback 'c [slope [cx cy [gx gy]]]'");
  add_setting_flag(app, flags, "res", "raster resolution");
  add_setting_flag(app, flags, "levels", "number of levels");
  add_setting_flag(app, flags, "switch", "branch switch level t*");
  add_setting_flag(app, flags, "out", "output directory (LGL_OUT overrides)");
  add_setting_flag(app, flags, "experiment", "verify suite or 'all'");
  add_setting_flag(app, flags, "seed", "random seed");
  add_setting_flag(app, flags, "from", "geodesic start 'x y'");
  add_setting_flag(app, flags, "to", "geodesic end 'x y'");

  CLI::App* catalog = app.add_subcommand("catalog", "list catalog weights");
  CLI::App* geodesic = app.add_subcommand("geodesic", "weighted geodesic between --from and --to");
  std::vector<std::string> via;
  std::string method = "lattice";
  std::string branch = "minimal";
  geodesic->add_option("--via", via, "evaluate the polyline through these points 'x y' instead of solving");
  geodesic->add_option("--method", method, "lattice | shoot | oracle")
      ->check(CLI::IsMember({"lattice", "shoot", "oracle"}));
  geodesic->add_option("--branch", branch, "minimal (upper) | maximal (lower)")
      ->check(CLI::IsMember({"minimal", "maximal"}));
  CLI::App* solve = app.add_subcommand("solve", "stack level curves into u and write PGM, SVG and CSV");
  CLI::App* verify = app.add_subcommand("verify", "run verification suites");
  CLI::App* figure = app.add_subcommand("figure", "render a reference figure preset");
  std::string figure_id;
  bool list_figures = false;
  figure->add_option("id", figure_id, "figure id");
  figure->add_flag("--list", list_figures, "list figure ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const lgl::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kUsage;
  }

  try {
    if (figure->parsed()) {
      if (list_figures || figure_id.empty()) {
        for (const std::string& id : lgl::figure_ids()) std::printf("%s\n", id.c_str());
        return figure_id.empty() && !list_figures ? kUsage : kOk;
      }
      return cmd_solve(resolve(flags, lgl::figure_preset(figure_id)), figure_id);
    }
    const lgl::RunConfig cfg = resolve(flags);
    if (catalog->parsed()) return cmd_catalog();
    if (geodesic->parsed()) return cmd_geodesic(cfg, via, method, branch);
    if (solve->parsed()) return cmd_solve(cfg, cfg.weight);
    if (verify->parsed()) return cmd_verify(cfg);
  } catch (const lgl::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kUsage;
  } catch (const lgl::NestingError& e) {
    std::fprintf(stderr, "nesting violation: %s\n", e.what());
    return kSolverFailed;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kSolverFailed;
  }
  return kUsage;
}
