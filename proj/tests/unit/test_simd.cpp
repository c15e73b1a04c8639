#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <random>
#include <string>

#include "edgetrack/simd/kernels.hpp"

namespace edgetrack::simd {
namespace {

struct MatchCase {
  std::size_t n_pixels;
  int n_samples;
  std::vector<std::uint8_t> planes, intensity, threshold;
};

MatchCase random_match_case(std::mt19937_64& rng, std::size_t n_pixels, int n_samples) {
  MatchCase c{n_pixels, n_samples, {}, {}, {}};
  std::uniform_int_distribution<int> byte(0, 255);
  c.planes.resize(n_pixels * n_samples);
  c.intensity.resize(n_pixels);
  c.threshold.resize(n_pixels);
  for (auto& v : c.planes) v = std::uint8_t(byte(rng));
  for (std::size_t i = 0; i < n_pixels; ++i) {
    c.intensity[i] = std::uint8_t(byte(rng));
    // Samples near the intensity so counts are not all zero.
    for (int k = 0; k < n_samples; ++k)
      if (byte(rng) < 128) c.planes[k * n_pixels + i] = std::uint8_t(std::clamp(c.intensity[i] + byte(rng) % 41 - 20, 0, 255));
    const int pick = byte(rng);
    c.threshold[i] = pick < 16 ? 0 : pick > 240 ? 255 : std::uint8_t(pick % 64);
  }
  return c;
}

void run_match(const KernelTable& k, const MatchCase& c, std::vector<std::uint8_t>& count,
               std::vector<std::uint8_t>& dmin) {
  count.assign(c.n_pixels, 0xEE);
  dmin.assign(c.n_pixels, 0xEE);
  k.sample_match({c.planes.data(), c.n_pixels, c.n_samples, c.intensity.data(), c.threshold.data(), count.data(),
                  dmin.data(), c.n_pixels});
}

TEST(Kernels, ScalarAlwaysAvailable) {
  const auto isas = available_isas();
  ASSERT_FALSE(isas.empty());
  EXPECT_EQ(isas.front(), Isa::Scalar);
  EXPECT_EQ(kernels_for(Isa::Scalar).isa, Isa::Scalar);
}

TEST(Kernels, ScalarSampleMatchMatchesDefinition) {
  std::mt19937_64 rng(1);
  const MatchCase c = random_match_case(rng, 257, 7);
  std::vector<std::uint8_t> count, dmin;
  run_match(scalar_kernels(), c, count, dmin);
  for (std::size_t i = 0; i < c.n_pixels; ++i) {
    int expect_count = 0, expect_min = 255;
    for (int k = 0; k < c.n_samples; ++k) {
      const int d = std::abs(int(c.planes[k * c.n_pixels + i]) - int(c.intensity[i]));
      expect_count += d < c.threshold[i];
      expect_min = std::min(expect_min, d);
    }
    ASSERT_EQ(count[i], expect_count);
    ASSERT_EQ(dmin[i], expect_min);
  }
}

TEST(Kernels, SampleMatchVariantsAgreeWithScalar) {
  std::mt19937_64 rng(2);
  for (const Isa isa : available_isas()) {
    for (std::size_t n_pixels : {1u, 15u, 31u, 32u, 33u, 64u, 1000u, 76800u}) {
      for (int n_samples : {1, 2, 20, 33}) {
        const MatchCase c = random_match_case(rng, n_pixels, n_samples);
        std::vector<std::uint8_t> ref_count, ref_dmin, count, dmin;
        run_match(scalar_kernels(), c, ref_count, ref_dmin);
        run_match(kernels_for(isa), c, count, dmin);
        ASSERT_EQ(count, ref_count) << to_string(isa) << " pixels=" << n_pixels << " N=" << n_samples;
        ASSERT_EQ(dmin, ref_dmin) << to_string(isa) << " pixels=" << n_pixels << " N=" << n_samples;
      }
    }
  }
}

WindowMoments run_window(const KernelTable& k, const std::vector<std::uint8_t>& tpl, std::size_t ts,
                         const std::vector<std::uint8_t>& img, std::size_t is, int w, int h) {
  return k.window_moments({tpl.data(), ts, img.data(), is, w, h});
}

TEST(Kernels, ScalarWindowMomentsMatchDefinition) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> byte(0, 255);
  const int w = 13, h = 9;
  std::vector<std::uint8_t> tpl(20 * h), img(31 * h);
  for (auto& v : tpl) v = std::uint8_t(byte(rng));
  for (auto& v : img) v = std::uint8_t(byte(rng));
  WindowMoments expect;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::uint64_t t = tpl[y * 20 + x], p = img[y * 31 + x];
      expect.sum_t += t;
      expect.sum_tt += t * t;
      expect.sum_p += p;
      expect.sum_pp += p * p;
      expect.sum_tp += t * p;
    }
  EXPECT_EQ(run_window(scalar_kernels(), tpl, 20, img, 31, w, h), expect);
}

TEST(Kernels, WindowMomentVariantsAgreeWithScalar) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> byte(0, 255);
  for (const Isa isa : available_isas()) {
    for (int w : {1, 7, 15, 16, 17, 31, 32, 33, 40, 64, 71}) {
      for (int h : {1, 3, 40}) {
        const std::size_t ts = w + 5, is = w + 11;
        std::vector<std::uint8_t> tpl(ts * h), img(is * h);
        for (auto& v : tpl) v = std::uint8_t(byte(rng));
        for (auto& v : img) v = std::uint8_t(byte(rng));
        ASSERT_EQ(run_window(kernels_for(isa), tpl, ts, img, is, w, h),
                  run_window(scalar_kernels(), tpl, ts, img, is, w, h))
            << to_string(isa) << " " << w << "x" << h;
      }
    }
  }
}

TEST(Kernels, WindowMomentsSaturatedLargeWindowDoesNotOverflow) {
  // All-255 inputs over a window far larger than any 16-bit or 32-bit
  // accumulator lane can hold without periodic flushing.
  const int w = 640, h = 600;
  std::vector<std::uint8_t> tpl(std::size_t(w) * h, 255), img(std::size_t(w) * h, 255);
  const std::uint64_t n = std::uint64_t(w) * h;
  for (const Isa isa : available_isas()) {
    const WindowMoments m = run_window(kernels_for(isa), tpl, w, img, w, w, h);
    EXPECT_EQ(m.sum_t, 255 * n) << to_string(isa);
    EXPECT_EQ(m.sum_tt, 255 * 255 * n) << to_string(isa);
    EXPECT_EQ(m.sum_tp, 255 * 255 * n) << to_string(isa);
    EXPECT_EQ(m.sum_pp, 255 * 255 * n) << to_string(isa);
  }
}

TEST(Kernels, OverrideSelectsNamedVariant) {
  const Isa best = available_isas().back();
  EXPECT_EQ(select_kernels("scalar").isa, Isa::Scalar);
  EXPECT_EQ(select_kernels(nullptr).isa, best);
  EXPECT_EQ(select_kernels("bogus").isa, best);
  for (const Isa isa : available_isas()) EXPECT_EQ(select_kernels(std::string(to_string(isa)).c_str()).isa, isa);
}

}  // namespace
}  // namespace edgetrack::simd
