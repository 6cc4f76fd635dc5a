#include "lgl/graph_geodesic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "lgl/error.hpp"
#include "lgl/kernels.hpp"

namespace lgl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

GraphGeodesicSolver::GraphGeodesicSolver(WeightField w, GraphOptions options) : w_(std::move(w)), opt_(options) {
  if (opt_.columns_per_unit < 2 || opt_.rows_per_unit < 2 || opt_.max_row_step < 1) {
    throw std::invalid_argument("invalid lattice options");
  }
  dx_ = 1.0 / opt_.columns_per_unit;
  h_ = 1.0 / opt_.rows_per_unit;
  cols_half_ = opt_.columns_per_unit - 1;
  rows_half_ = opt_.rows_per_unit;
  rows_ = 2 * rows_half_ + 1;
  const int ncols = 2 * cols_half_ + 1;
  col_row_lo_.resize(static_cast<std::size_t>(ncols));
  col_row_hi_.resize(static_cast<std::size_t>(ncols));
  for (int ci = 0; ci < ncols; ++ci) {
    const double x = column_x(ci - cols_half_);
    const int r = static_cast<int>(std::floor(std::sqrt(std::max(0.0, 1.0 - x * x)) * opt_.rows_per_unit + 1e-9));
    col_row_lo_[static_cast<std::size_t>(ci)] = rows_half_ - r;
    col_row_hi_[static_cast<std::size_t>(ci)] = rows_half_ + r;
  }

  const int M = opt_.max_row_step;
  const int nm = 2 * M + 1;
  costs_.assign(static_cast<std::size_t>(ncols - 1) * nm * rows_, kInf);
  for (int ci = 0; ci + 1 < ncols; ++ci) {
    const int c = ci - cols_half_;
    const double x0 = column_x(c), x1 = column_x(c + 1);
    for (int m = -M; m <= M; ++m) {
      double* out = costs_.data() + (static_cast<std::size_t>(ci) * nm + (m + M)) * rows_;
      for (int j1 = 0; j1 < rows_; ++j1) {
        const int j0 = j1 - m;
        if (!node_valid(c, j0) || !node_valid(c + 1, j1)) continue;
        out[j1] = w_.segment_integral({x0, row_y(j0)}, {x1, row_y(j1)});
      }
    }
  }
}

bool GraphGeodesicSolver::node_valid(int c, int j) const {
  if (c < -cols_half_ || c > cols_half_ || j < 0 || j >= rows_) return false;
  const auto ci = static_cast<std::size_t>(c + cols_half_);
  return j >= col_row_lo_[ci] && j <= col_row_hi_[ci];
}

const double* GraphGeodesicSolver::edge_costs(int c, int m) const {
  const int M = opt_.max_row_step;
  return costs_.data() + (static_cast<std::size_t>(c + cols_half_) * (2 * M + 1) + (m + M)) * rows_;
}

Polyline GraphGeodesicSolver::solve(Point a, Point b, Branch branch, double polish_tol) const {
  if (!(a.x < b.x)) throw std::invalid_argument("graph solver needs a.x < b.x");
  for (Point p : {a, b}) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x * p.x + p.y * p.y > 1.0 + 1e-12) {
      throw std::invalid_argument("endpoints must lie in the closed unit disk");
    }
  }
  const double sign = branch == Branch::minimal ? 1.0 : -1.0;
  const double lambda = opt_.area_bias * dx_;
  auto bias = [&](double y) { return -sign * lambda * y; };

  int c_first = static_cast<int>(std::floor((a.x + 0.25 * dx_) / dx_)) + 1;
  int c_last = static_cast<int>(std::ceil((b.x - 0.25 * dx_) / dx_)) - 1;
  c_first = std::max(c_first, -cols_half_);
  c_last = std::min(c_last, cols_half_);
  if (c_first > c_last) return Polyline({a, b});

  const int M = opt_.max_row_step;
  const double slope_limit = M * h_ / dx_;
  const auto rows = static_cast<std::size_t>(rows_);

  std::vector<double> val(rows, kInf);
  {
    const double x = column_x(c_first);
    for (int j = 0; j < rows_; ++j) {
      if (!node_valid(c_first, j)) continue;
      const double y = row_y(j);
      if (std::abs(y - a.y) > slope_limit * (x - a.x) + h_) continue;
      val[static_cast<std::size_t>(j)] = w_.segment_integral(a, {x, y}) + bias(y);
    }
  }

  // Row steps in order of increasing size so that exact ties keep the
  // gentler step.
  std::vector<int> order{0};
  for (int m = 1; m <= M; ++m) {
    order.push_back(m);
    order.push_back(-m);
  }
  const int span = c_last - c_first;
  std::vector<std::int64_t> args(static_cast<std::size_t>(span) * rows, 0);
  std::vector<double> padded(rows + 2 * static_cast<std::size_t>(M), kInf);
  std::vector<double> next(rows);
  for (int c = c_first; c < c_last; ++c) {
    std::copy(val.begin(), val.end(), padded.begin() + M);
    std::fill(next.begin(), next.end(), kInf);
    std::int64_t* arg = args.data() + static_cast<std::size_t>(c - c_first) * rows;
    for (int m : order) {
      kernels::minplus_relax(next.data(), arg, padded.data() + M - m, edge_costs(c, m), rows, m);
    }
    for (int j = 0; j < rows_; ++j) {
      if (std::isfinite(next[static_cast<std::size_t>(j)])) next[static_cast<std::size_t>(j)] += bias(row_y(j));
    }
    val.swap(next);
  }

  int best_j = -1;
  double best = kInf;
  {
    const double x = column_x(c_last);
    for (int k = 0; k < rows_; ++k) {
      // Visit rows from the preferred side first.
      const int j = sign > 0 ? rows_ - 1 - k : k;
      if (!std::isfinite(val[static_cast<std::size_t>(j)])) continue;
      const double y = row_y(j);
      if (std::abs(y - b.y) > slope_limit * (b.x - x) + h_) continue;
      const double total = val[static_cast<std::size_t>(j)] + w_.segment_integral({x, y}, b);
      if (total < best) {
        best = total;
        best_j = j;
      }
    }
  }
  if (best_j < 0) throw SolverError("no lattice path joins the endpoints");

  std::vector<double> ys(static_cast<std::size_t>(span) + 1);
  int j = best_j;
  for (int c = c_last; c >= c_first; --c) {
    ys[static_cast<std::size_t>(c - c_first)] = row_y(j);
    if (c == c_first) break;
    const auto m = static_cast<int>(args[static_cast<std::size_t>(c - 1 - c_first) * rows + static_cast<std::size_t>(j)]);
    if (std::abs(m) >= M) {
      std::ostringstream os;
      os << "geodesic is too steep to be a graph over x near x = " << column_x(c);
      throw SolverError(os.str());
    }
    j -= m;
  }

  ys = polish(a, b, c_first, std::move(ys), sign, polish_tol);

  std::vector<Point> pts;
  pts.reserve(ys.size() + 2);
  pts.push_back(a);
  for (std::size_t i = 0; i < ys.size(); ++i) pts.push_back({column_x(c_first + static_cast<int>(i)), ys[i]});
  pts.push_back(b);
  return Polyline(std::move(pts));
}

std::vector<double> GraphGeodesicSolver::polish(Point a, Point b, int c_first, std::vector<double> ys, double sign,
                                                double tol) const {
  const std::size_t n = ys.size();
  const double lambda = opt_.area_bias * dx_;
  std::vector<double> xs(n), ymax(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = column_x(c_first + static_cast<int>(i));
    ymax[i] = std::sqrt(std::max(0.0, 1.0 - xs[i] * xs[i]));
  }
  auto objective = [&](const std::vector<double>& y) {
    double s = w_.segment_integral(a, {xs[0], y[0]});
    for (std::size_t i = 0; i + 1 < n; ++i) s += w_.segment_integral({xs[i], y[i]}, {xs[i + 1], y[i + 1]});
    s += w_.segment_integral({xs[n - 1], y[n - 1]}, b);
    for (double v : y) s -= sign * lambda * v;
    return s;
  };

  constexpr std::array<int, 3> kSteps{0, -1, 1};
  double current = objective(ys);
  std::vector<std::array<double, 3>> best(n);
  std::vector<std::array<int, 3>> from(n);
  double delta = 0.5 * h_;
  for (int iter = 0; iter < 2000 && delta >= tol; ++iter) {
    auto cand = [&](std::size_t i, int s) { return ys[i] + kSteps[static_cast<std::size_t>(s)] * delta; };
    for (int s = 0; s < 3; ++s) {
      const double y = cand(0, s);
      best[0][static_cast<std::size_t>(s)] =
          std::abs(y) > ymax[0] ? kInf : w_.segment_integral(a, {xs[0], y}) - sign * lambda * y;
    }
    for (std::size_t i = 1; i < n; ++i) {
      for (int s = 0; s < 3; ++s) {
        const double y = cand(i, s);
        double bv = kInf;
        int bf = 0;
        if (std::abs(y) <= ymax[i]) {
          for (int p = 0; p < 3; ++p) {
            const double prev = best[i - 1][static_cast<std::size_t>(p)];
            if (!std::isfinite(prev)) continue;
            const double v = prev + w_.segment_integral({xs[i - 1], cand(i - 1, p)}, {xs[i], y});
            if (v < bv) {
              bv = v;
              bf = p;
            }
          }
          bv -= sign * lambda * y;
        }
        best[i][static_cast<std::size_t>(s)] = bv;
        from[i][static_cast<std::size_t>(s)] = bf;
      }
    }
    double total = kInf;
    int last = 0;
    for (int s = 0; s < 3; ++s) {
      const double v = best[n - 1][static_cast<std::size_t>(s)];
      if (!std::isfinite(v)) continue;
      const double t = v + w_.segment_integral({xs[n - 1], cand(n - 1, s)}, b);
      if (t < total) {
        total = t;
        last = s;
      }
    }
    if (total < current - 2e-15 * (1.0 + std::abs(current))) {
      std::vector<double> moved(n);
      int s = last;
      for (std::size_t i = n; i-- > 0;) {
        moved[i] = cand(i, s);
        if (i > 0) s = from[i][static_cast<std::size_t>(s)];
      }
      // The Viterbi total sums in a different order than objective(), so
      // re-evaluate before accepting; otherwise rounding noise loops forever.
      const double value = objective(moved);
      if (moved != ys && value < current - 2e-15 * (1.0 + std::abs(current))) {
        ys.swap(moved);
        current = value;
        continue;
      }
    }
    delta *= 0.5;
  }
  return ys;
}

Polyline graph_geodesic(const WeightField& w, Point a, Point b, Branch branch, double polish_tol,
                        GraphOptions options) {
  if (a == b) throw std::invalid_argument("graph_geodesic needs distinct endpoints");
  const double angle = std::atan2(b.y - a.y, b.x - a.x);
  if (angle == 0.0) return GraphGeodesicSolver(w, options).solve(a, b, branch, polish_tol);
  // In the rotated frame p' = rotate(p, -angle) the chord points along +x.
  const GraphGeodesicSolver solver(w.rotated(angle), options);
  const Polyline local = solver.solve(rotate(a, -angle), rotate(b, -angle), branch, polish_tol);
  std::vector<Point> pts(local.vertices().begin(), local.vertices().end());
  for (Point& p : pts) p = rotate(p, angle);
  pts.front() = a;
  pts.back() = b;
  return Polyline(std::move(pts));
}

}  // namespace lgl
