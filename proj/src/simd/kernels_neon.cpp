#include <arm_neon.h>

#include <algorithm>
#include <cstdlib>

#include "edgetrack/simd/kernels.hpp"

namespace edgetrack::simd {

namespace {

void sample_match_neon(const SampleMatchArgs& a) {
  std::size_t i = 0;
  for (; i + 16 <= a.n_pixels; i += 16) {
    const uint8x16_t value = vld1q_u8(a.intensity + i);
    const uint8x16_t limit = vld1q_u8(a.threshold + i);
    uint8x16_t count = vdupq_n_u8(0);
    uint8x16_t best = vdupq_n_u8(255);
    for (int k = 0; k < a.n_samples; ++k) {
      const uint8x16_t s = vld1q_u8(a.planes + k * a.plane_stride + i);
      const uint8x16_t d = vabdq_u8(s, value);
      best = vminq_u8(best, d);
      // lanes are 0xFF where d < limit; subtracting adds one
      count = vsubq_u8(count, vcltq_u8(d, limit));
    }
    vst1q_u8(a.match_count + i, count);
    vst1q_u8(a.min_distance + i, best);
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

WindowMoments window_moments_neon(const WindowArgs& a) {
  WindowMoments m;
  const int vec_width = a.width & ~7;
  for (int r = 0; r < a.height; ++r) {
    const std::uint8_t* trow = a.tpl + r * a.tpl_stride;
    const std::uint8_t* prow = a.img + r * a.img_stride;
    // one row of 8-pixel chunks stays far below 32-bit lane overflow
    uint32x4_t acc_t = vdupq_n_u32(0), acc_p = acc_t, acc_tt = acc_t, acc_pp = acc_t, acc_tp = acc_t;
    for (int c = 0; c < vec_width; c += 8) {
      const uint16x8_t t = vmovl_u8(vld1_u8(trow + c));
      const uint16x8_t p = vmovl_u8(vld1_u8(prow + c));
      acc_t = vpadalq_u16(acc_t, t);
      acc_p = vpadalq_u16(acc_p, p);
      acc_tt = vmlal_u16(vmlal_u16(acc_tt, vget_low_u16(t), vget_low_u16(t)), vget_high_u16(t), vget_high_u16(t));
      acc_pp = vmlal_u16(vmlal_u16(acc_pp, vget_low_u16(p), vget_low_u16(p)), vget_high_u16(p), vget_high_u16(p));
      acc_tp = vmlal_u16(vmlal_u16(acc_tp, vget_low_u16(t), vget_low_u16(p)), vget_high_u16(t), vget_high_u16(p));
    }
    m.sum_t += vaddlvq_u32(acc_t);
    m.sum_p += vaddlvq_u32(acc_p);
    m.sum_tt += vaddlvq_u32(acc_tt);
    m.sum_pp += vaddlvq_u32(acc_pp);
    m.sum_tp += vaddlvq_u32(acc_tp);
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
  return m;
}

}  // namespace

const KernelTable& neon_kernels() {
  static const KernelTable table{Isa::Neon, &sample_match_neon, &window_moments_neon};
  return table;
}

}  // namespace edgetrack::simd
