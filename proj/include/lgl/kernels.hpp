#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

// Hot loops with a portable scalar reference and an AVX2 variant. The
// variant is chosen once at runtime from CPU support; LGL_SIMD=scalar in the
// environment forces the reference path.
namespace lgl::kernels {

enum class Isa { scalar, avx2 };

[[nodiscard]] bool avx2_supported();
[[nodiscard]] Isa active_isa();
/// Overrides the dispatch (tests). Throws std::runtime_error when the CPU
/// lacks the requested instruction set.
void set_isa(Isa isa);
[[nodiscard]] std::string_view to_string(Isa isa);

/// dst[j] = min(dst[j], src[j] + cost[j]); arg[j] = tag wherever the
/// candidate is strictly smaller.
void minplus_relax(double* dst, std::int64_t* arg, const double* src, const double* cost, std::size_t n,
                   std::int64_t tag);

/// sum_j w[j] * |a[j] - b[j]|
[[nodiscard]] double weighted_abs_diff_sum(const double* a, const double* b, const double* w, std::size_t n);

/// sum_{j < n-1} sqrt((row[j+1]-row[j])^2 + (next[j]-row[j])^2) * wt[j]
[[nodiscard]] double tv_row(const double* row, const double* next, const double* wt, std::size_t n);

/// 16x16 binary raster, row r stored in bits [16 r, 16 r + 16).
struct Bits256 {
  std::uint64_t w[4] = {0, 0, 0, 0};
};

/// Number of interior grid edges separating a set from its complement.
[[nodiscard]] int cut_edges16(const Bits256& s);

struct PairScan {
  std::uint64_t pairs = 0;
  std::uint64_t violations = 0;  // cut(A&B) + cut(A|B) > cut(A) + cut(B)
  std::uint64_t equalities = 0;
};

/// Submodularity check over all unordered pairs (i <= j) of `sets`;
/// `cuts[i]` must equal cut_edges16(sets[i]).
[[nodiscard]] PairScan scan_pairs16(std::span<const Bits256> sets, std::span<const int> cuts);

namespace scalar {
void minplus_relax(double*, std::int64_t*, const double*, const double*, std::size_t, std::int64_t);
double weighted_abs_diff_sum(const double*, const double*, const double*, std::size_t);
double tv_row(const double*, const double*, const double*, std::size_t);
int cut_edges16(const Bits256&);
PairScan scan_pairs16(std::span<const Bits256>, std::span<const int>);
}  // namespace scalar

namespace avx2 {
void minplus_relax(double*, std::int64_t*, const double*, const double*, std::size_t, std::int64_t);
double weighted_abs_diff_sum(const double*, const double*, const double*, std::size_t);
double tv_row(const double*, const double*, const double*, std::size_t);
int cut_edges16(const Bits256&);
PairScan scan_pairs16(std::span<const Bits256>, std::span<const int>);
}  // namespace avx2

}  // namespace lgl::kernels
