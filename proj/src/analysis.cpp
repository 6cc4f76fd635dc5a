#include "lgl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "lgl/error.hpp"
#include "lgl/geodesy.hpp"

namespace lgl {

std::string_view to_string(Check c) {
  switch (c) {
    case Check::abs: return "abs";
    case Check::rel: return "rel";
    case Check::at_least: return ">=";
    case Check::at_most: return "<=";
  }
  return "?";
}

bool Quantity::evaluate() const {
  if (!std::isfinite(value)) return false;
  switch (check) {
    case Check::abs: return std::abs(value - expected) <= tolerance;
    case Check::rel: return std::abs(value - expected) <= tolerance * std::abs(expected);
    case Check::at_least: return value >= expected - tolerance;
    case Check::at_most: return value <= expected + tolerance;
  }
  return false;
}

Quantity& ExperimentReport::add(std::string label, double value, double expected, double tolerance, Check check) {
  Quantity q{std::move(label), value, expected, tolerance, check, false};
  q.pass = q.evaluate();
  quantities.push_back(std::move(q));
  return quantities.back();
}

bool ExperimentReport::all_pass() const {
  return std::all_of(quantities.begin(), quantities.end(), [](const Quantity& q) { return q.pass; });
}

std::vector<std::string> ExperimentReport::failing() const {
  std::vector<std::string> out;
  for (const Quantity& q : quantities) {
    if (!q.pass) out.push_back(q.label);
  }
  return out;
}

// ---------------------------------------------------------------------------

double curvature_clearance(const WeightField& w, Point z, double r, const GraphOptions& options) {
  if (!std::isfinite(z.x) || !std::isfinite(z.y) || std::abs(norm(z) - 1.0) > 1e-9) {
    throw std::invalid_argument("clearance base point must lie on the unit circle");
  }
  if (!(r > 0.0 && r < 2.0)) {
    throw std::invalid_argument("the circle of radius r around z must cross the boundary twice (0 < r < 2)");
  }
  // Frame p' = rotate(p, -angle) puts z at (0, -1).
  const double angle = std::atan2(z.y, z.x) + 0.5 * std::numbers::pi;
  const double psi = 2.0 * std::asin(0.5 * r);
  const Point a{-std::sin(psi), -std::cos(psi)};
  const Point b{std::sin(psi), -std::cos(psi)};
  // Ray shooting is exact on layered weights; the lattice solver covers the rest.
  try {
    const Polyline shot = shoot_two_point(w, rotate(a, angle), rotate(b, angle), 1e-12, Branch::maximal);
    return shot.distance_to(z);
  } catch (const SolverError&) {
  }
  const GraphGeodesicSolver solver(w.rotated(angle), options);
  const Polyline path = solver.solve(a, b, Branch::maximal, 1e-10);
  return path.distance_to({0.0, -1.0});
}

// ---------------------------------------------------------------------------

RasterSet set_intersection(const RasterSet& a, const RasterSet& b) {
  if (a.res != b.res) throw std::invalid_argument("raster sizes differ");
  RasterSet out(a.res);
  for (std::size_t k = 0; k < out.cells.size(); ++k) out.cells[k] = a.cells[k] & b.cells[k];
  return out;
}

RasterSet set_union(const RasterSet& a, const RasterSet& b) {
  if (a.res != b.res) throw std::invalid_argument("raster sizes differ");
  RasterSet out(a.res);
  for (std::size_t k = 0; k < out.cells.size(); ++k) out.cells[k] = a.cells[k] | b.cells[k];
  return out;
}

PerimeterWeights::PerimeterWeights(const WeightField& w, int resolution) : res(resolution) {
  if (res < 2) throw std::invalid_argument("perimeter raster needs res >= 2");
  const double s = 2.0 / res;
  RasterSet probe(res);
  std::vector<double> wc(static_cast<std::size_t>(res) * res);
  for (int j = 0; j < res; ++j) {
    for (int i = 0; i < res; ++i) wc[static_cast<std::size_t>(j) * res + i] = w.eval(probe.center(i, j));
  }
  horizontal.resize(static_cast<std::size_t>(res) * (res - 1));
  vertical.resize(static_cast<std::size_t>(res) * (res - 1));
  for (int j = 0; j < res; ++j) {
    for (int i = 0; i + 1 < res; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * res + i;
      horizontal[static_cast<std::size_t>(j) * (res - 1) + i] = 0.5 * (wc[k] + wc[k + 1]) * s;
    }
  }
  for (int j = 0; j + 1 < res; ++j) {
    for (int i = 0; i < res; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * res + i;
      vertical[k] = 0.5 * (wc[k] + wc[k + res]) * s;
    }
  }
}

double discrete_perimeter(const RasterSet& s, const PerimeterWeights& pw) {
  if (s.res != pw.res) throw std::invalid_argument("raster and weights differ in size");
  const int n = s.res;
  std::vector<double> v(s.cells.begin(), s.cells.end());
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    const double* row = v.data() + static_cast<std::size_t>(j) * n;
    total += kernels::weighted_abs_diff_sum(row, row + 1, pw.horizontal.data() + static_cast<std::size_t>(j) * (n - 1),
                                            static_cast<std::size_t>(n - 1));
    if (j + 1 < n) {
      total += kernels::weighted_abs_diff_sum(row, row + n, pw.vertical.data() + static_cast<std::size_t>(j) * n,
                                              static_cast<std::size_t>(n));
    }
  }
  return total;
}

namespace {

RasterSet random_ball_union(int res, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_int_distribution<int> kind(0, 1);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::uniform_real_distribution<double> radius(0.05, 0.6);
  RasterSet s(res);
  const int k = count(rng);
  for (int b = 0; b < k; ++b) {
    const bool l1 = kind(rng) == 0;
    const Point c{coord(rng), coord(rng)};
    const double r = radius(rng);
    for (int j = 0; j < res; ++j) {
      for (int i = 0; i < res; ++i) {
        const Vec d = s.center(i, j) - c;
        if ((l1 ? l1_norm(d) : norm(d)) <= r) s.at(i, j) = 1;
      }
    }
  }
  return s;
}

}  // namespace

SubmodularityResult submodularity_check(int res, int trials, std::uint64_t seed, const WeightField& w) {
  if (res < 64) throw std::invalid_argument("submodularity_check needs res >= 64");
  if (trials < 1) throw std::invalid_argument("submodularity_check needs trials >= 1");
  const PerimeterWeights pw(w, res);
  std::mt19937_64 rng(seed);
  SubmodularityResult out;
  out.trials = trials;
  out.worst_excess = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const RasterSet a = random_ball_union(res, rng);
    const RasterSet b = random_ball_union(res, rng);
    const double pa = discrete_perimeter(a, pw), pb = discrete_perimeter(b, pw);
    const double excess = discrete_perimeter(set_intersection(a, b), pw) + discrete_perimeter(set_union(a, b), pw) -
                          pa - pb;
    out.worst_excess = std::max(out.worst_excess, excess);
    if (excess <= 1e-12 * (pa + pb)) ++out.passed;
  }
  return out;
}

kernels::PairScan rectangle_pairs16() {
  std::vector<kernels::Bits256> sets;
  sets.reserve(18496);
  for (int j0 = 0; j0 < 16; ++j0) {
    for (int j1 = j0; j1 < 16; ++j1) {
      for (int i0 = 0; i0 < 16; ++i0) {
        for (int i1 = i0; i1 < 16; ++i1) {
          kernels::Bits256 s;
          const std::uint64_t row = ((std::uint64_t{1} << (i1 - i0 + 1)) - 1) << i0;
          for (int r = j0; r <= j1; ++r) s.w[r / 4] |= row << (16 * (r % 4));
          sets.push_back(s);
        }
      }
    }
  }
  std::vector<int> cuts(sets.size());
  for (std::size_t k = 0; k < sets.size(); ++k) cuts[k] = kernels::cut_edges16(sets[k]);
  return kernels::scan_pairs16(sets, cuts);
}

// ---------------------------------------------------------------------------

namespace {

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol, const char* what) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (!(flo * fhi < 0.0)) {
    std::ostringstream os;
    os << "no root of the " << what << " condition in (" << lo << ", " << hi << ")";
    throw SolverError(os.str());
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

DiamondThresholds three_diamonds_thresholds(double alpha) {
  if (!(alpha >= std::sqrt(2.0))) throw std::invalid_argument("three_diamonds_thresholds needs alpha >= sqrt(2)");
  const WeightField w = WeightField::three_heavy_diamonds(alpha);
  constexpr Point kBottomL{-0.5, -0.25}, kBottomR{0.5, -0.25};
  constexpr Point kTopL{-0.5, 0.25}, kTopR{0.5, 0.25}, kMidTop{0.0, 0.375};

  // t0: the bottom-tip path and the path over all three top tips tie.
  auto tie = [&](double t) {
    const auto [p, q] = boundary_points(t);
    const double bottom = weighted_length(Polyline({p, kBottomL, kBottomR, q}), w);
    const double top = weighted_length(Polyline({p, kTopL, kMidTop, kTopR, q}), w);
    return bottom - top;
  };
  // t1: the direct segment to the small top tip stops cutting the large
  // diamond; before that its weighted length exceeds its Euclidean length.
  auto cuts = [&](double t) {
    const Point p = boundary_points(t).first;
    const double excess = weighted_length(Polyline({p, kMidTop}), w) - distance(p, kMidTop);
    return excess > 1e-12 ? 1.0 : -1.0;
  };
  DiamondThresholds out;
  out.t0 = bisect(tie, 0.75, 1.375, 1e-8, "tip-path tie");
  out.t1 = bisect(cuts, 0.75, 1.375, 1e-8, "tip alignment");
  return out;
}

// ---------------------------------------------------------------------------

Nonuniqueness compare_stacks(const SolutionStack& a, const SolutionStack& b,
                             std::optional<std::pair<double, double>> band) {
  const GridField& fa = a.field();
  const GridField& fb = b.field();
  if (fa.res != fb.res) throw std::invalid_argument("stacks are sampled on different grids");
  const double delta = std::max(a.level_spacing(), b.level_spacing());
  const double cell = fa.spacing * fa.spacing;
  Nonuniqueness out;
  for (int j = 0; j < fa.res; ++j) {
    for (int i = 0; i < fa.res; ++i) {
      if (!fa.inside(i, j)) continue;
      const double ua = fa.at(i, j), ub = fb.at(i, j);
      if (std::abs(ua - ub) <= 2.0 * delta) continue;
      const double m = a.weight().eval(fa.center(i, j)) * cell;
      out.area += m;
      if (band && ((ua >= band->first && ua <= band->second) || (ub >= band->first && ub <= band->second))) {
        out.band_area += m;
      }
    }
  }
  out.energy_a = bv_energy(a);
  out.energy_b = bv_energy(b);
  out.energy_rel_gap = std::abs(out.energy_a - out.energy_b) / std::max(out.energy_a, out.energy_b);
  out.energies_match = out.energy_rel_gap <= 0.005;
  return out;
}

Nonuniqueness nonuniqueness_gap(const WeightField& w, BranchPolicy a, BranchPolicy b, const std::vector<double>& levels,
                                const StackOptions& options, std::optional<std::pair<double, double>> band) {
  if (a == b) throw std::invalid_argument("nonuniqueness_gap needs two different policies");
  const GraphGeodesicSolver solver(w, options.graph);
  const SolutionStack sa = stack(solver, levels, a, options);
  const SolutionStack sb = stack(solver, levels, b, options);
  return compare_stacks(sa, sb, band);
}

GridField convex_combination(const GridField& a, const GridField& b, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
  if (a.res != b.res) throw std::invalid_argument("fields are sampled on different grids");
  GridField out(a.res);
  for (std::size_t k = 0; k < out.samples.size(); ++k) out.samples[k] = lambda * a.samples[k] + (1.0 - lambda) * b.samples[k];
  return out;
}

// ---------------------------------------------------------------------------

double ldhc_probe_length(double eps, double b, double theta) {
  static const WeightField w = WeightField::lite_dmd_heavy_core();
  return weighted_length(Polyline({{-eps, b}, {0.0, b + eps * std::tan(theta)}}), w);
}

ExperimentReport litedmdheavycore_checks() {
  ExperimentReport rep;
  rep.name = "lite_dmd_heavy_core";
  const WeightField w = WeightField::lite_dmd_heavy_core();

  const double straight = weighted_length(Polyline({{-0.5, 0.0}, {0.5, 0.0}}), w);
  const double kinked = weighted_length(Polyline({{-0.5, 0.0}, {0.0, 0.2}, {0.5, 0.0}}), w);
  rep.add("straight path length", straight, 0.625, 1e-9);
  rep.add("kinked path length", kinked, 0.575 * std::sqrt(1.16), 1e-9);
  rep.add("kinked minus straight", kinked - straight, 0.0, 0.0, Check::at_most);

  const GraphGeodesicSolver solver(w);
  const double step = 2.0 * solver.dx();
  for (double t : {0.9, 1.0, 1.1}) {
    const LevelCurve c = level_curve(solver, t, Branch::minimal, 1e-10);
    const double g0 = c.value_at(0.0);
    const double right = (c.value_at(step) - g0) / step;
    const double left = (g0 - c.value_at(-step)) / step;
    std::ostringstream os;
    os << "one-sided slope at the y-axis, t=" << t;
    rep.add(os.str(), std::max(std::abs(left), std::abs(right)), 0.0, 0.02, Check::at_most);
  }

  constexpr double kEps = 1e-3, kB = 0.25, kH = 1e-5;
  for (double theta : {-0.3, 0.3}) {
    const double c2 = std::cos(theta) * std::cos(theta);
    const double fd = 4.0 * c2 * (ldhc_probe_length(kEps, kB, theta + kH) - ldhc_probe_length(kEps, kB, theta - kH)) /
                      (2.0 * kH);
    const double exact = (3.0 - 2.0 * kEps - 2.0 * kB) * kEps * std::sin(theta) +
                         2.0 * kEps * kEps * (std::cos(theta) - std::sin(theta)) * std::tan(theta) -
                         kEps * kEps * (std::cos(theta) + std::sin(theta));
    const double leading = (3.0 - 2.0 * kB) * kEps * std::sin(theta);
    std::ostringstream os;
    os << "theta=" << theta;
    rep.add("4cos^2 dI/dtheta sign, " + os.str(), fd, 0.0, 0.0, theta < 0 ? Check::at_most : Check::at_least);
    rep.add("4cos^2 dI/dtheta vs closed form, " + os.str(), fd, exact, 1e-6, Check::rel);
    rep.add("4cos^2 dI/dtheta vs leading term, " + os.str(), fd, leading, 0.01, Check::rel);
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

double golden_section(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

ExperimentReport snell_suite(std::uint64_t seed, int instances) {
  if (instances < 1) throw std::invalid_argument("snell_suite needs at least one instance");
  ExperimentReport rep;
  rep.name = "snell";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> logw(std::log(0.25), std::log(4.0));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> chain_len(2, 8);

  double law = 0.0, reciprocity = 0.0, chain = 0.0, composed = 0.0;
  int tir_flagged = 0, tir_cases = 0;
  for (int k = 0; k < instances; ++k) {
    const double w_in = std::exp(logw(rng)), w_out = std::exp(logw(rng));
    const double critical = w_out < w_in ? std::asin(w_out / w_in) : 0.5 * std::numbers::pi;
    const double theta = 0.999 * critical * unit(rng);
    const auto out = snell_refract(w_in, w_out, theta);
    if (!out) {
      law = std::numeric_limits<double>::infinity();
      continue;
    }
    law = std::max(law, std::abs(w_out * std::sin(*out) - w_in * std::sin(theta)));
    const auto back = snell_refract(w_out, w_in, *out);
    reciprocity = std::max(reciprocity, back ? std::abs(*back - theta) : std::numeric_limits<double>::infinity());

    if (w_out < w_in) {
      ++tir_cases;
      const double beyond = critical + (0.5 * std::numbers::pi - critical) * (0.001 + 0.998 * unit(rng));
      if (!snell_refract(w_in, w_out, beyond)) ++tir_flagged;
    }

    std::vector<double> ws(static_cast<std::size_t>(chain_len(rng)));
    for (double& v : ws) v = std::exp(logw(rng));
    const double lightest = *std::min_element(ws.begin(), ws.end());
    const double theta1 = 0.999 * std::asin(std::min(1.0, lightest / ws.front())) * unit(rng);
    const double last = snell_chain(ws, theta1);
    chain = std::max(chain, std::abs(last - std::asin(ws.front() / ws.back() * std::sin(theta1))));
    double seq = theta1;
    for (std::size_t i = 1; i < ws.size(); ++i) seq = *snell_refract(ws[i - 1], ws[i], seq);
    composed = std::max(composed, std::abs(last - seq));
  }
  rep.add("max |w_out sin(out) - w_in sin(in)|", law, 0.0, 1e-12, Check::at_most);
  rep.add("max reciprocity error", reciprocity, 0.0, 1e-12, Check::at_most);
  rep.add("max chain vs endpoint formula", chain, 0.0, 1e-12, Check::at_most);
  rep.add("max chain vs sequential refraction", composed, 0.0, 1e-12, Check::at_most);
  rep.add("supercritical cases flagged", tir_flagged, tir_cases, 0.0);

  // Two horizontal layers: weight 1 down to y = -1, weight 2 below.
  constexpr double kX2 = 1.5;
  const WeightField two = WeightField::layered_horizontal({{1.0, 1.0}, {2.0, 2.0}});
  const Polyline shot = shoot_two_point(two, {0.0, 0.0}, {kX2, -2.0}, 1e-12);
  double kink = std::numeric_limits<double>::quiet_NaN();
  for (Point p : shot.vertices()) {
    if (std::abs(p.y + 1.0) < 1e-9) kink = p.x;
  }
  auto d = [](double x) { return std::hypot(x, 1.0) + 2.0 * std::hypot(x - kX2, 1.0); };
  const double xmin = golden_section(d, 0.0, kX2, 1e-12);
  rep.add("two-layer kink vs golden-section minimiser", kink, xmin, 1e-6);
  const double ratio = (kink / std::hypot(kink, 1.0)) / ((kX2 - kink) / std::hypot(kX2 - kink, 1.0));
  rep.add("two-layer sin ratio", ratio, 2.0, 1e-6);
  return rep;
}

ExperimentReport thresholds_suite() {
  ExperimentReport rep;
  rep.name = "thresholds";
  const DiamondThresholds base = three_diamonds_thresholds(std::sqrt(2.0));
  rep.add("t0 (alpha=sqrt2)", base.t0, 1.017, 0.005);
  rep.add("t1 (alpha=sqrt2)", base.t1, 1.127, 0.005);
  rep.add("t0 above 3/4", base.t0, 0.75, 0.0, Check::at_least);
  rep.add("t1 - t0", base.t1 - base.t0, 0.0, 0.0, Check::at_least);
  rep.add("t1 below 11/8", base.t1, 1.375, 0.0, Check::at_most);
  for (double alpha : {2.0, 5.0}) {
    const DiamondThresholds th = three_diamonds_thresholds(alpha);
    std::ostringstream os;
    os << "(alpha=" << alpha << ")";
    rep.add("t0 " + os.str(), th.t0, base.t0, 1e-7);
    rep.add("t1 " + os.str(), th.t1, base.t1, 1e-7);
  }
  return rep;
}

ExperimentReport submodularity_suite(std::uint64_t seed) {
  ExperimentReport rep;
  rep.name = "submodularity";
  const SubmodularityResult c = submodularity_check(256, 1000, seed);
  rep.add("random pairs passing, constant weight", c.passed, c.trials, 0.0);
  const SubmodularityResult h = submodularity_check(256, 200, seed + 1, WeightField::heavy_disk(2.0));
  rep.add("random pairs passing, heavy_disk(2)", h.passed, h.trials, 0.0);
  const kernels::PairScan rect = rectangle_pairs16();
  rep.add("rectangle pairs scanned", static_cast<double>(rect.pairs), 18496.0 * 18497.0 / 2.0, 0.0);
  rep.add("rectangle pair violations", static_cast<double>(rect.violations), 0.0, 0.0);
  return rep;
}

ExperimentReport clearance_suite(std::uint64_t seed) {
  ExperimentReport rep;
  rep.name = "clearance";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> rad(0.05, 0.9);
  const WeightField one = WeightField::constant();
  double worst = 0.0;
  for (int k = 0; k < 32; ++k) {
    const double phi = ang(rng), r = rad(rng);
    const double c = curvature_clearance(one, {std::cos(phi), std::sin(phi)}, r);
    worst = std::max(worst, std::abs(c / (0.5 * r * r) - 1.0));
  }
  rep.add("max |clearance / (r^2/2) - 1|, constant weight, 32 samples", worst, 0.0, 1e-6, Check::at_most);
  double previous = 0.0, drop = 0.0;
  for (double r = 0.05; r < 0.5; r += 0.05) {
    const double c = curvature_clearance(one, {0.0, -1.0}, r);
    drop = std::max(drop, previous - c);
    previous = c;
  }
  rep.add("largest decrease of clearance in r", drop, 0.0, 0.0, Check::at_most);
  rep.add("clearance, light_diamond_tight(1/2), z=(0,-1), r=0.2",
          curvature_clearance(WeightField::light_diamond_tight(0.5), {0.0, -1.0}, 0.2), 1e-9, 0.0, Check::at_least);
  return rep;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"clearance", "ldhc", "snell", "submodularity", "thresholds"};
  return names;
}

ExperimentReport run_suite(std::string_view name, std::uint64_t seed) {
  if (name == "snell") return snell_suite(seed);
  if (name == "thresholds") return thresholds_suite();
  if (name == "submodularity") return submodularity_suite(seed);
  if (name == "clearance") return clearance_suite(seed);
  if (name == "ldhc") return litedmdheavycore_checks();
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

}  // namespace lgl
