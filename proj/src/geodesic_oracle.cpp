#include "lgl/geodesic_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "lgl/error.hpp"

namespace lgl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Offset {
  int di, dj;
};

constexpr std::array<Offset, 8> kEight{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
constexpr std::array<Offset, 16> kSixteen{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1},
                                           {1, 2}, {2, 1}, {-1, 2}, {-2, 1}, {1, -2}, {2, -1}, {-1, -2}, {-2, -1}}};

}  // namespace

OraclePath grid_shortest_path(const WeightField& w, int res, Point a, Point b, const OracleOptions& options) {
  if (res < 32) throw std::invalid_argument("oracle resolution must be at least 32");
  for (Point p : {a, b}) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x * p.x + p.y * p.y > 1.0 + 1e-12) {
      throw std::invalid_argument("oracle endpoints must lie in the closed unit disk");
    }
  }
  const int side = 2 * res + 1;
  const auto n_nodes = static_cast<std::size_t>(side) * static_cast<std::size_t>(side);
  const double step = 1.0 / res;
  auto index = [side, res](int i, int j) { return static_cast<std::size_t>(j + res) * side + (i + res); };
  auto point = [step](int i, int j) { return Point{i * step, j * step}; };

  std::vector<unsigned char> valid(n_nodes, 0);
  std::vector<double> wn(n_nodes, 0.0);
  const long long r2 = static_cast<long long>(res) * res;
  for (int j = -res; j <= res; ++j) {
    for (int i = -res; i <= res; ++i) {
      if (static_cast<long long>(i) * i + static_cast<long long>(j) * j > r2) continue;
      const Point p = point(i, j);
      if (options.mask && !options.mask(p)) continue;
      valid[index(i, j)] = 1;
      if (options.rule == EdgeRule::trapezoid) wn[index(i, j)] = w.eval(p);
    }
  }

  auto nearest = [&](Point p) {
    const int i0 = static_cast<int>(std::lround(p.x * res));
    const int j0 = static_cast<int>(std::lround(p.y * res));
    std::size_t best = n_nodes;
    double best_d = kInf;
    for (int dj = -2; dj <= 2; ++dj) {
      for (int di = -2; di <= 2; ++di) {
        const int i = i0 + di, j = j0 + dj;
        if (i < -res || i > res || j < -res || j > res || !valid[index(i, j)]) continue;
        const double d = distance(point(i, j), p);
        if (d < best_d) {
          best_d = d;
          best = index(i, j);
        }
      }
    }
    if (best == n_nodes) throw std::invalid_argument("no grid node near an oracle endpoint");
    return best;
  };
  const std::size_t src = nearest(a), dst = nearest(b);

  const Offset* stencil = options.stencil == Stencil::sixteen ? kSixteen.data() : kEight.data();
  const int n_off = options.stencil == Stencil::sixteen ? 16 : 8;

  std::vector<double> dist(n_nodes, kInf);
  std::vector<std::uint32_t> prev(n_nodes, std::numeric_limits<std::uint32_t>::max());
  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[src] = 0.0;
  heap.emplace(0.0, static_cast<std::uint32_t>(src));
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    if (u == dst) break;
    const int i = static_cast<int>(u % side) - res, j = static_cast<int>(u / side) - res;
    const Point p = point(i, j);
    for (int k = 0; k < n_off; ++k) {
      const int ni = i + stencil[k].di, nj = j + stencil[k].dj;
      if (ni < -res || ni > res || nj < -res || nj > res) continue;
      const std::size_t v = index(ni, nj);
      if (!valid[v]) continue;
      const Point q = point(ni, nj);
      const double edge = options.rule == EdgeRule::trapezoid ? distance(p, q) * 0.5 * (wn[u] + wn[v])
                                                              : w.segment_integral(p, q);
      const double nd = d + edge;
      if (nd < dist[v]) {
        dist[v] = nd;
        prev[v] = u;
        heap.emplace(nd, static_cast<std::uint32_t>(v));
      }
    }
  }
  if (!std::isfinite(dist[dst])) throw SolverError("oracle endpoints are disconnected");

  std::vector<Point> pts;
  for (std::size_t v = dst;; v = prev[v]) {
    pts.push_back(point(static_cast<int>(v % side) - res, static_cast<int>(v / side) - res));
    if (v == src) break;
  }
  std::reverse(pts.begin(), pts.end());
  if (pts.size() == 1) pts.push_back(pts.front() + Point{step, 0.0});  // degenerate: both ends on one node
  return {Polyline(std::move(pts)), dist[dst], res};
}

RefineResult refine_until(const WeightField& w, Point a, Point b, double rel_tol, const OracleOptions& options) {
  if (!(rel_tol >= 0.002)) throw std::invalid_argument("refine_until needs rel_tol >= 0.002");
  RefineResult out;
  double previous = grid_shortest_path(w, 128, a, b, options).cost;
  out.cost = previous;
  out.resolution = 128;
  out.achieved_tol = kInf;
  for (int res = 256; res <= 2048; res *= 2) {
    const double cost = grid_shortest_path(w, res, a, b, options).cost;
    out.achieved_tol = std::abs(cost - previous) / cost;
    out.cost = cost;
    out.resolution = res;
    if (out.achieved_tol < rel_tol) {
      out.converged = true;
      return out;
    }
    previous = cost;
  }
  return out;
}

}  // namespace lgl
