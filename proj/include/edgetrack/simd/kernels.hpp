#pragma once

// Data-parallel inner loops shared by the segmenter and the correlation
// tracker. Each kernel has a scalar reference implementation and optional
// vector variants; all variants produce bit-identical integer results.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace edgetrack::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);

// Per-pixel sample-bank statistics.
//   planes[k * plane_stride + i] is sample k of pixel i.
//   match_count[i] = #{k : |sample - intensity[i]| < threshold[i]}
//   min_distance[i] = min_k |sample - intensity[i]|
// threshold is an integer bound, so "< threshold" is exact.
struct SampleMatchArgs {
  const std::uint8_t* planes;
  std::size_t plane_stride;
  int n_samples;
  const std::uint8_t* intensity;
  const std::uint8_t* threshold;
  std::uint8_t* match_count;
  std::uint8_t* min_distance;
  std::size_t n_pixels;
};

// Raw moments of a template window against an image window of equal size.
struct WindowMoments {
  std::uint64_t sum_t = 0;
  std::uint64_t sum_tt = 0;
  std::uint64_t sum_p = 0;
  std::uint64_t sum_pp = 0;
  std::uint64_t sum_tp = 0;
  friend bool operator==(const WindowMoments&, const WindowMoments&) = default;
};

struct WindowArgs {
  const std::uint8_t* tpl;
  std::size_t tpl_stride;
  const std::uint8_t* img;
  std::size_t img_stride;
  int width;
  int height;
};

struct KernelTable {
  Isa isa;
  void (*sample_match)(const SampleMatchArgs&);
  WindowMoments (*window_moments)(const WindowArgs&);
};

const KernelTable& scalar_kernels();

// Variants compiled into this binary and supported by the running CPU.
std::vector<Isa> available_isas();

const KernelTable& kernels_for(Isa isa);

// Table named by `forced` when available, else the best available one.
const KernelTable& select_kernels(const char* forced);

// Best available ISA, unless EDGETRACK_SIMD=scalar|avx2|neon overrides it.
const KernelTable& active_kernels();

}  // namespace edgetrack::simd
