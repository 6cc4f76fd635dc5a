#include <cmath>

#include "lgl/kernels.hpp"

namespace lgl::kernels::scalar {

namespace {

constexpr std::uint64_t kRowInterior = 0x7FFF7FFF7FFF7FFFULL;  // 15 horizontal edges per row

int popcount64(std::uint64_t v) {
  int c = 0;
  while (v != 0) {
    v &= v - 1;
    ++c;
  }
  return c;
}

}  // namespace

void minplus_relax(double* dst, std::int64_t* arg, const double* src, const double* cost, std::size_t n,
                   std::int64_t tag) {
  for (std::size_t j = 0; j < n; ++j) {
    const double c = src[j] + cost[j];
    if (c < dst[j]) {
      dst[j] = c;
      arg[j] = tag;
    }
  }
}

double weighted_abs_diff_sum(const double* a, const double* b, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += w[j] * std::abs(a[j] - b[j]);
  return s;
}

double tv_row(const double* row, const double* next, const double* wt, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double gx = row[j + 1] - row[j];
    const double gy = next[j] - row[j];
    s += std::sqrt(gx * gx + gy * gy) * wt[j];
  }
  return s;
}

int cut_edges16(const Bits256& s) {
  int count = 0;
  for (int k = 0; k < 4; ++k) {
    const std::uint64_t v = s.w[k];
    count += popcount64((v ^ (v >> 1)) & kRowInterior);
    // Row pairs inside the word, then the pair straddling the next word.
    count += popcount64((v ^ (v >> 16)) & 0x0000FFFFFFFFFFFFULL);
    if (k < 3) count += popcount64(((v >> 48) ^ s.w[k + 1]) & 0xFFFFULL);
  }
  return count;
}

PairScan scan_pairs16(std::span<const Bits256> sets, std::span<const int> cuts) {
  PairScan out;
  const std::size_t n = sets.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Bits256 meet, join;
      for (int k = 0; k < 4; ++k) {
        meet.w[k] = sets[i].w[k] & sets[j].w[k];
        join.w[k] = sets[i].w[k] | sets[j].w[k];
      }
      const int lhs = scalar::cut_edges16(meet) + scalar::cut_edges16(join);
      const int rhs = cuts[i] + cuts[j];
      ++out.pairs;
      if (lhs > rhs) ++out.violations;
      if (lhs == rhs) ++out.equalities;
    }
  }
  return out;
}

}  // namespace lgl::kernels::scalar
