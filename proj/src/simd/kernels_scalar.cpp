#include "edgetrack/simd/kernels.hpp"

#include <algorithm>
#include <cstdlib>

namespace edgetrack::simd {

namespace {

void sample_match_scalar(const SampleMatchArgs& a) {
  for (std::size_t i = 0; i < a.n_pixels; ++i) {
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

WindowMoments window_moments_scalar(const WindowArgs& a) {
  WindowMoments m;
  for (int r = 0; r < a.height; ++r) {
    const std::uint8_t* t = a.tpl + r * a.tpl_stride;
    const std::uint8_t* p = a.img + r * a.img_stride;
    for (int c = 0; c < a.width; ++c) {
      const std::uint64_t tv = t[c];
      const std::uint64_t pv = p[c];
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

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::Scalar, &sample_match_scalar, &window_moments_scalar};
  return table;
}

}  // namespace edgetrack::simd
