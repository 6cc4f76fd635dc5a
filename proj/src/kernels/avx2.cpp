#include <immintrin.h>

#include <cmath>

#include "lgl/kernels.hpp"

namespace lgl::kernels::avx2 {

namespace {

inline __m256i load_bits(const Bits256& s) { return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(s.w)); }

// Per-byte popcount via nibble lookup.
inline __m256i popcount_bytes(__m256i v) {
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4, 0, 1, 1, 2, 1, 2, 2, 3, 1,
                                       2, 2, 3, 2, 3, 3, 4);
  const __m256i low = _mm256_set1_epi8(0x0F);
  const __m256i lo = _mm256_shuffle_epi8(lut, _mm256_and_si256(v, low));
  const __m256i hi = _mm256_shuffle_epi8(lut, _mm256_and_si256(_mm256_srli_epi16(v, 4), low));
  return _mm256_add_epi8(lo, hi);
}

// Boundary-edge indicator bits: horizontal neighbours and vertical neighbours.
inline void edge_bits(__m256i s, __m256i& h, __m256i& v) {
  const __m256i row_interior = _mm256_set1_epi64x(0x7FFF7FFF7FFF7FFFLL);
  h = _mm256_and_si256(_mm256_xor_si256(s, _mm256_srli_epi64(s, 1)), row_interior);
  // next = words shifted down one lane, zero in the top lane.
  const __m256i next = _mm256_and_si256(_mm256_permute4x64_epi64(s, _MM_SHUFFLE(0, 3, 2, 1)),
                                        _mm256_setr_epi64x(-1, -1, -1, 0));
  const __m256i below = _mm256_or_si256(_mm256_srli_epi64(s, 16), _mm256_slli_epi64(next, 48));
  const __m256i last_row = _mm256_setr_epi64x(-1, -1, -1, 0x0000FFFFFFFFFFFFLL);
  v = _mm256_and_si256(_mm256_xor_si256(s, below), last_row);
}

inline int horizontal_sum(__m256i bytes) {
  const __m256i sums = _mm256_sad_epu8(bytes, _mm256_setzero_si256());
  const __m128i s = _mm_add_epi64(_mm256_castsi256_si128(sums), _mm256_extracti128_si256(sums, 1));
  return static_cast<int>(_mm_cvtsi128_si64(s) + _mm_extract_epi64(s, 1));
}

}  // namespace

void minplus_relax(double* dst, std::int64_t* arg, const double* src, const double* cost, std::size_t n,
                   std::int64_t tag) {
  const __m256i vtag = _mm256_set1_epi64x(tag);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d c = _mm256_add_pd(_mm256_loadu_pd(src + j), _mm256_loadu_pd(cost + j));
    const __m256d d = _mm256_loadu_pd(dst + j);
    const __m256d better = _mm256_cmp_pd(c, d, _CMP_LT_OQ);
    _mm256_storeu_pd(dst + j, _mm256_blendv_pd(d, c, better));
    const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(arg + j));
    const __m256i na = _mm256_castpd_si256(
        _mm256_blendv_pd(_mm256_castsi256_pd(a), _mm256_castsi256_pd(vtag), better));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(arg + j), na);
  }
  for (; j < n; ++j) {
    const double c = src[j] + cost[j];
    if (c < dst[j]) {
      dst[j] = c;
      arg[j] = tag;
    }
  }
}

double weighted_abs_diff_sum(const double* a, const double* b, const double* w, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d d = _mm256_andnot_pd(sign, _mm256_sub_pd(_mm256_loadu_pd(a + j), _mm256_loadu_pd(b + j)));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + j), d, acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; j < n; ++j) s += w[j] * std::abs(a[j] - b[j]);
  return s;
}

double tv_row(const double* row, const double* next, const double* wt, std::size_t n) {
  if (n < 2) return 0.0;
  const std::size_t m = n - 1;
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= m; j += 4) {
    const __m256d r = _mm256_loadu_pd(row + j);
    const __m256d gx = _mm256_sub_pd(_mm256_loadu_pd(row + j + 1), r);
    const __m256d gy = _mm256_sub_pd(_mm256_loadu_pd(next + j), r);
    const __m256d g = _mm256_sqrt_pd(_mm256_fmadd_pd(gx, gx, _mm256_mul_pd(gy, gy)));
    acc = _mm256_fmadd_pd(g, _mm256_loadu_pd(wt + j), acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; j < m; ++j) {
    const double gx = row[j + 1] - row[j];
    const double gy = next[j] - row[j];
    s += std::sqrt(gx * gx + gy * gy) * wt[j];
  }
  return s;
}

int cut_edges16(const Bits256& s) {
  __m256i h, v;
  edge_bits(load_bits(s), h, v);
  return horizontal_sum(_mm256_add_epi8(popcount_bytes(h), popcount_bytes(v)));
}

PairScan scan_pairs16(std::span<const Bits256> sets, std::span<const int> cuts) {
  PairScan out;
  const std::size_t n = sets.size();
  for (std::size_t i = 0; i < n; ++i) {
    const __m256i a = load_bits(sets[i]);
    for (std::size_t j = i; j < n; ++j) {
      const __m256i b = load_bits(sets[j]);
      __m256i h1, v1, h2, v2;
      edge_bits(_mm256_and_si256(a, b), h1, v1);
      edge_bits(_mm256_or_si256(a, b), h2, v2);
      // Each byte count is at most 8, so four of them fit in a byte.
      const __m256i bytes = _mm256_add_epi8(_mm256_add_epi8(popcount_bytes(h1), popcount_bytes(v1)),
                                            _mm256_add_epi8(popcount_bytes(h2), popcount_bytes(v2)));
      const int lhs = horizontal_sum(bytes);
      const int rhs = cuts[i] + cuts[j];
      ++out.pairs;
      out.violations += lhs > rhs ? 1 : 0;
      out.equalities += lhs == rhs ? 1 : 0;
    }
  }
  return out;
}

}  // namespace lgl::kernels::avx2
