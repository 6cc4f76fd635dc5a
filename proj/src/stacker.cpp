#include "lgl/stacker.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "lgl/error.hpp"
#include "lgl/kernels.hpp"

namespace lgl {

double boundary_half_width(double t) {
  const double d = t - 1.0;
  return std::sqrt(std::max(0.0, 1.0 - d * d));
}

std::pair<Point, Point> boundary_points(double t) {
  if (!(t > 0.0 && t < 2.0)) throw std::invalid_argument("level must lie in (0, 2)");
  const double xb = boundary_half_width(t);
  return {{-xb, t - 1.0}, {xb, t - 1.0}};
}

std::vector<double> uniform_levels(int n) {
  if (n < 1) throw std::invalid_argument("level count must be positive");
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) t[static_cast<std::size_t>(k - 1)] = (k - 0.5) * 2.0 / n;
  return t;
}

// ---------------------------------------------------------------------------

LevelCurve::LevelCurve(double level, Branch branch, Polyline path, double weighted_length)
    : level_(level),
      branch_(branch),
      path_(std::move(path)),
      weighted_length_(weighted_length),
      half_width_(boundary_half_width(level)) {}

double LevelCurve::value_at(double x) const {
  const auto v = path_.vertices();
  if (x <= v.front().x || x >= v.back().x) return level_ - 1.0;
  const auto it = std::upper_bound(v.begin(), v.end(), x, [](double xv, const Point& p) { return xv < p.x; });
  const Point q = *it, p = *(it - 1);
  if (q.x == p.x) return q.y;
  return p.y + (q.y - p.y) * (x - p.x) / (q.x - p.x);
}

LevelCurve level_curve(const GraphGeodesicSolver& solver, double t, Branch branch, double polish_tol) {
  const auto [a, b] = boundary_points(t);
  try {
    Polyline path = solver.solve(a, b, branch, polish_tol);
    const double len = weighted_length(path, solver.weight());
    return LevelCurve(t, branch, std::move(path), len);
  } catch (const SolverError& e) {
    std::ostringstream os;
    os << "level t = " << t << ": " << e.what();
    throw SolverError(os.str());
  }
}

LevelCurve level_curve(const WeightField& w, double t, Branch branch, double polish_tol) {
  return level_curve(GraphGeodesicSolver(w), t, branch, polish_tol);
}

// ---------------------------------------------------------------------------

GridField::GridField(int resolution) : res(resolution), spacing(2.0 / resolution) {
  if (resolution < 2) throw std::invalid_argument("raster resolution must be at least 2");
  samples.assign(static_cast<std::size_t>(res) * res, 0.0);
  mask.assign(static_cast<std::size_t>(res) * res, 0);
  for (int j = 0; j < res; ++j) {
    for (int i = 0; i < res; ++i) {
      const Point p = center(i, j);
      mask[static_cast<std::size_t>(j) * res + i] = p.x * p.x + p.y * p.y < 1.0 ? 1 : 0;
    }
  }
}

int GridField::column_of(double x) const {
  return std::clamp(static_cast<int>(std::floor((x + 1.0) / spacing)), 0, res - 1);
}

int GridField::row_of(double y) const {
  return std::clamp(static_cast<int>(std::floor((y + 1.0) / spacing)), 0, res - 1);
}

SolutionStack::SolutionStack(WeightField w, std::vector<LevelCurve> curves, BranchPolicy policy, GridField field)
    : w_(std::move(w)), curves_(std::move(curves)), policy_(policy), field_(std::move(field)) {}

std::vector<double> SolutionStack::levels() const {
  std::vector<double> t;
  t.reserve(curves_.size());
  for (const LevelCurve& c : curves_) t.push_back(c.level());
  return t;
}

double SolutionStack::level_spacing() const {
  double gap = 0.0;
  for (std::size_t k = 0; k + 1 < curves_.size(); ++k) {
    gap = std::max(gap, curves_[k + 1].level() - curves_[k].level());
  }
  return gap;
}

// ---------------------------------------------------------------------------

namespace {

template <class F>
void parallel_for(std::size_t n, int threads, const F& body) {
  unsigned hw = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
  hw = std::min<unsigned>(hw, static_cast<unsigned>(std::max<std::size_t>(n, 1)));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (hw <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < hw; ++k) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<double> sample_columns(int samples) {
  std::vector<double> xs(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) xs[static_cast<std::size_t>(i)] = -1.0 + (i + 0.5) * 2.0 / samples;
  return xs;
}

void check_nesting(const std::vector<LevelCurve>& curves, int res) {
  const double tol = 2.0 / res;
  for (double x : sample_columns(res)) {
    double run = -std::numeric_limits<double>::infinity();
    double run_level = 0.0;
    for (const LevelCurve& c : curves) {
      const double g = c.value_at(x);
      if (g < run - tol) {
        std::ostringstream os;
        os << "level curves t = " << run_level << " and t = " << c.level() << " cross at x = " << x << " by "
           << run - g;
        throw NestingError(run_level, c.level(), os.str());
      }
      if (g > run) {
        run = g;
        run_level = c.level();
      }
    }
  }
}

}  // namespace

double nesting_margin(const std::vector<LevelCurve>& curves, int samples) {
  double margin = std::numeric_limits<double>::infinity();
  for (double x : sample_columns(samples)) {
    double run = -std::numeric_limits<double>::infinity();
    for (const LevelCurve& c : curves) {
      const double g = c.value_at(x);
      margin = std::min(margin, g - run);
      run = std::max(run, g);
    }
  }
  return margin;
}

GridField fill_field(const std::vector<LevelCurve>& curves, int resolution, Reconstruction recon,
                     double bridge_cells) {
  if (!(bridge_cells >= 0.0)) throw std::invalid_argument("bridge_cells must be non-negative");
  GridField f(resolution);
  const double bridge = bridge_cells * f.spacing;
  const std::size_t n = curves.size();
  std::vector<double> g(n);
  for (int i = 0; i < f.res; ++i) {
    const double x = f.center(i, 0).x;
    for (std::size_t k = 0; k < n; ++k) g[k] = curves[k].value_at(x);
    // Residual crossings are resolved the way the branch resolves ties:
    // maximal curves take the running max from below, minimal curves the
    // running min from above. Both repairs map onto each other under
    // (y, t) -> (-y, 2 - t), and the pointwise max (min) of two crossing
    // minimizers is again a minimizer.
    for (std::size_t k = 1; k < n; ++k) {
      if (curves[k].branch() == Branch::maximal && curves[k - 1].branch() == Branch::maximal) {
        g[k] = std::max(g[k], g[k - 1]);
      }
    }
    // Suffix minima: y >= G_k iff y >= g_j for some j >= k, so the largest
    // admissible k is exactly the sup over all curves below the sample.
    for (std::size_t k = n; k-- > 1;) g[k - 1] = std::min(g[k - 1], g[k]);
    for (int j = 0; j < f.res; ++j) {
      const Point p = f.center(i, j);
      if (!f.inside(i, j)) {
        f.at(i, j) = boundary_data(p);
        continue;
      }
      const auto idx = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), p.y) - g.begin());
      f.at(i, j) = idx == 0 ? 0.0 : curves[idx - 1].level();
      if (recon == Reconstruction::bridged && idx > 0 && idx < n) {
        const double lo = g[idx - 1], hi = g[idx];
        if (hi > lo && hi - lo <= bridge) {
          const double tl = curves[idx - 1].level(), th = curves[idx].level();
          f.at(i, j) = tl + (th - tl) * (p.y - lo) / (hi - lo);
        }
      }
    }
  }
  return f;
}

SolutionStack stack(const GraphGeodesicSolver& solver, const std::vector<double>& levels, BranchPolicy policy,
                    const StackOptions& options) {
  if (levels.size() < 16) throw std::invalid_argument("a stack needs at least 16 levels");
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (!(levels[k] > 0.0 && levels[k] < 2.0)) throw std::invalid_argument("levels must lie in (0, 2)");
    if (k > 0 && !(levels[k] > levels[k - 1])) throw std::invalid_argument("levels must increase strictly");
  }
  std::vector<std::unique_ptr<LevelCurve>> slots(levels.size());
  parallel_for(levels.size(), options.threads, [&](std::size_t k) {
    slots[k] = std::make_unique<LevelCurve>(
        level_curve(solver, levels[k], policy.branch_at(levels[k]), options.polish_tol));
  });
  std::vector<LevelCurve> curves;
  curves.reserve(levels.size());
  for (auto& s : slots) curves.push_back(std::move(*s));
  check_nesting(curves, options.resolution);
  GridField field = fill_field(curves, options.resolution);
  return SolutionStack(solver.weight(), std::move(curves), policy, std::move(field));
}

SolutionStack stack(const WeightField& w, const std::vector<double>& levels, BranchPolicy policy,
                    const StackOptions& options) {
  return stack(GraphGeodesicSolver(w, options.graph), levels, policy, options);
}

// ---------------------------------------------------------------------------

double bv_energy(const SolutionStack& s) {
  const auto& c = s.curves();
  double total = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double lo = k == 0 ? 0.0 : 0.5 * (c[k - 1].level() + c[k].level());
    const double hi = k + 1 == c.size() ? 2.0 : 0.5 * (c[k].level() + c[k + 1].level());
    total += c[k].weighted_length() * (hi - lo);
  }
  return total;
}

double discrete_tv(const GridField& field, const WeightField& w, EdgeWeight rule) {
  const int n = field.res;
  std::vector<double> ws(field.samples.size());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) ws[static_cast<std::size_t>(j) * n + i] = w.eval(field.center(i, j));
  }
  std::vector<double> wt(static_cast<std::size_t>(n));
  double total = 0.0;
  for (int j = 0; j + 1 < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const bool ok = i + 1 < n && field.inside(i, j) && field.inside(i + 1, j) && field.inside(i, j + 1);
      const std::size_t k = static_cast<std::size_t>(j) * n + i;
      if (!ok) {
        wt[static_cast<std::size_t>(i)] = 0.0;
        continue;
      }
      const double we = rule == EdgeWeight::lower ? std::min({ws[k], ws[k + 1], ws[k + n]})
                                                  : (ws[k] + ws[k + 1] + ws[k + n]) / 3.0;
      wt[static_cast<std::size_t>(i)] = we * field.spacing;
    }
    total += kernels::tv_row(field.samples.data() + static_cast<std::size_t>(j) * n,
                             field.samples.data() + static_cast<std::size_t>(j + 1) * n, wt.data(),
                             static_cast<std::size_t>(n));
  }
  return total;
}

double trace_error(const SolutionStack& s, int n_boundary, double r, const std::vector<Point>& exclude) {
  if (n_boundary < 1 || !(r > 0.0)) throw std::invalid_argument("trace_error needs n_boundary >= 1 and r > 0");
  const GridField& f = s.field();
  double worst = 0.0;
  for (int k = 0; k < n_boundary; ++k) {
    const double ang = 2.0 * std::numbers::pi * k / n_boundary;
    const Point z{std::cos(ang), std::sin(ang)};
    if (std::any_of(exclude.begin(), exclude.end(), [&](Point e) { return distance(e, z) < r; })) continue;
    const double fz = boundary_data(z);
    const int i0 = f.column_of(z.x - r), i1 = f.column_of(z.x + r);
    const int j0 = f.row_of(z.y - r), j1 = f.row_of(z.y + r);
    double sum = 0.0;
    long count = 0;
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) {
        if (!f.inside(i, j) || distance(f.center(i, j), z) >= r) continue;
        sum += std::abs(f.at(i, j) - fz);
        ++count;
      }
    }
    if (count == 0) throw std::invalid_argument("trace ball contains no raster sample; increase r");
    worst = std::max(worst, sum / static_cast<double>(count));
  }
  return worst;
}

std::vector<Point> jump_set(const SolutionStack& s, double gap_threshold) {
  if (!(gap_threshold > 2.0 * s.level_spacing())) {
    throw std::invalid_argument("jump threshold must exceed twice the level spacing");
  }
  const GridField& f = s.field();
  std::vector<Point> out;
  for (int j = 0; j < f.res; ++j) {
    for (int i = 0; i < f.res; ++i) {
      if (!f.inside(i, j)) continue;
      double lo = f.at(i, j), hi = lo;
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          const int a = i + di, b = j + dj;
          if (a < 0 || b < 0 || a >= f.res || b >= f.res || !f.inside(a, b)) continue;
          lo = std::min(lo, f.at(a, b));
          hi = std::max(hi, f.at(a, b));
        }
      }
      if (hi - lo > gap_threshold) out.push_back(f.center(i, j));
    }
  }
  return out;
}

double vertical_gap(const GridField& field, double x, double y) {
  const int i = field.column_of(x);
  const int j_hi = std::clamp(static_cast<int>(std::floor((y + 1.0) / field.spacing - 0.5)) + 1, 1, field.res - 1);
  return field.at(i, j_hi) - field.at(i, j_hi - 1);
}

}  // namespace lgl
