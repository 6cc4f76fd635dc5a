#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "lgl/kernels.hpp"

namespace lgl::kernels {

namespace {

Isa detect() {
  if (const char* env = std::getenv("LGL_SIMD"); env != nullptr && std::string(env) == "scalar") {
    return Isa::scalar;
  }
  return avx2_supported() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (isa == Isa::avx2 && !avx2_supported()) throw std::runtime_error("AVX2 is not supported on this CPU");
  current().store(isa, std::memory_order_relaxed);
}

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void minplus_relax(double* dst, std::int64_t* arg, const double* src, const double* cost, std::size_t n,
                   std::int64_t tag) {
  if (active_isa() == Isa::avx2) {
    avx2::minplus_relax(dst, arg, src, cost, n, tag);
  } else {
    scalar::minplus_relax(dst, arg, src, cost, n, tag);
  }
}

double weighted_abs_diff_sum(const double* a, const double* b, const double* w, std::size_t n) {
  return active_isa() == Isa::avx2 ? avx2::weighted_abs_diff_sum(a, b, w, n)
                                   : scalar::weighted_abs_diff_sum(a, b, w, n);
}

double tv_row(const double* row, const double* next, const double* wt, std::size_t n) {
  return active_isa() == Isa::avx2 ? avx2::tv_row(row, next, wt, n) : scalar::tv_row(row, next, wt, n);
}

int cut_edges16(const Bits256& s) {
  return active_isa() == Isa::avx2 ? avx2::cut_edges16(s) : scalar::cut_edges16(s);
}

PairScan scan_pairs16(std::span<const Bits256> sets, std::span<const int> cuts) {
  if (sets.size() != cuts.size()) throw std::invalid_argument("sets and cuts differ in size");
  return active_isa() == Isa::avx2 ? avx2::scan_pairs16(sets, cuts) : scalar::scan_pairs16(sets, cuts);
}

}  // namespace lgl::kernels
