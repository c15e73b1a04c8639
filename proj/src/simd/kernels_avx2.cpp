#include <immintrin.h>

#include <algorithm>
#include <cstdlib>

#include "edgetrack/simd/kernels.hpp"

namespace edgetrack::simd {

namespace {

void sample_match_avx2(const SampleMatchArgs& a) {
  const __m256i zero = _mm256_setzero_si256();
  const __m256i ones = _mm256_set1_epi8(-1);
  std::size_t i = 0;
  for (; i + 32 <= a.n_pixels; i += 32) {
    const __m256i value = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.intensity + i));
    const __m256i limit = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.threshold + i));
    __m256i count = zero;
    __m256i best = ones;
    for (int k = 0; k < a.n_samples; ++k) {
      const __m256i s = _mm256_loadu_si256(
          reinterpret_cast<const __m256i*>(a.planes + k * a.plane_stride + i));
      const __m256i d = _mm256_or_si256(_mm256_subs_epu8(s, value), _mm256_subs_epu8(value, s));
      best = _mm256_min_epu8(best, d);
      // d < limit  <=>  saturating (limit - d) is nonzero
      const __m256i not_less = _mm256_cmpeq_epi8(_mm256_subs_epu8(limit, d), zero);
      count = _mm256_sub_epi8(count, _mm256_xor_si256(not_less, ones));
    }
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(a.match_count + i), count);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(a.min_distance + i), best);
  }
  for (; i < a.n_pixels; ++i) {
    const int value = a.intensity[i];
    const int limit = a.threshold[i];
    int count = 0;
    int best = 255;
    for (int k = 0; k < a.n_samples; ++k) {
      const int d = std::abs(int(a.planes[k * a.plane_stride + i]) - value);
      count += d < limit;
      best = std::min(best, d);
    }
    a.match_count[i] = std::uint8_t(count);
    a.min_distance[i] = std::uint8_t(best);
  }
}

std::uint64_t hsum_epi32(__m256i v) {
  alignas(32) std::uint32_t lanes[8];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
  std::uint64_t total = 0;
  for (std::uint32_t lane : lanes) total += lane;
  return total;
}

WindowMoments window_moments_avx2(const WindowArgs& a) {
  // Each 16-pixel chunk adds at most 2 * 255^2 per 32-bit lane; flush to
  // 64-bit totals before the lanes can overflow.
  constexpr int kMaxChunksPerFlush = 16000;
  const __m256i one16 = _mm256_set1_epi16(1);

  WindowMoments m;
  __m256i acc_t = _mm256_setzero_si256();
  __m256i acc_tt = acc_t, acc_p = acc_t, acc_pp = acc_t, acc_tp = acc_t;
  int chunks = 0;

  auto flush = [&] {
    m.sum_t += hsum_epi32(acc_t);
    m.sum_tt += hsum_epi32(acc_tt);
    m.sum_p += hsum_epi32(acc_p);
    m.sum_pp += hsum_epi32(acc_pp);
    m.sum_tp += hsum_epi32(acc_tp);
    acc_t = acc_tt = acc_p = acc_pp = acc_tp = _mm256_setzero_si256();
    chunks = 0;
  };

  const int vec_width = a.width & ~15;
  for (int r = 0; r < a.height; ++r) {
    const std::uint8_t* trow = a.tpl + r * a.tpl_stride;
    const std::uint8_t* prow = a.img + r * a.img_stride;
    for (int c = 0; c < vec_width; c += 16) {
      const __m256i t = _mm256_cvtepu8_epi16(_mm_loadu_si128(reinterpret_cast<const __m128i*>(trow + c)));
      const __m256i p = _mm256_cvtepu8_epi16(_mm_loadu_si128(reinterpret_cast<const __m128i*>(prow + c)));
      acc_t = _mm256_add_epi32(acc_t, _mm256_madd_epi16(t, one16));
      acc_p = _mm256_add_epi32(acc_p, _mm256_madd_epi16(p, one16));
      acc_tt = _mm256_add_epi32(acc_tt, _mm256_madd_epi16(t, t));
      acc_pp = _mm256_add_epi32(acc_pp, _mm256_madd_epi16(p, p));
      acc_tp = _mm256_add_epi32(acc_tp, _mm256_madd_epi16(t, p));
      if (++chunks == kMaxChunksPerFlush) flush();
    }
    for (int c = vec_width; c < a.width; ++c) {
      const std::uint64_t tv = trow[c];
      const std::uint64_t pv = prow[c];
      m.sum_t += tv;
      m.sum_tt += tv * tv;
      m.sum_p += pv;
      m.sum_pp += pv * pv;
      m.sum_tp += tv * pv;
    }
  }
  flush();
  return m;
}

}  // namespace

const KernelTable& avx2_kernels() {
  static const KernelTable table{Isa::Avx2, &sample_match_avx2, &window_moments_avx2};
  return table;
}

}  // namespace edgetrack::simd
