#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <set>

#include <unistd.h>

#include "edgetrack/error.hpp"
#include "edgetrack/rng.hpp"
#include "edgetrack/segmenter.hpp"
#include "edgetrack/simd/kernels.hpp"
#include "test_support.hpp"

namespace edgetrack {
namespace {

using testing::constant_frame;
using testing::frame_of;
using testing::noise_plane;
using testing::thrown_code;

constexpr FrameDims kSmall{48, 36};

TEST(SegmenterInit, ConstantFrameSamplesStayWithinNoise) {
  const Segmenter seg(constant_frame(kSmall, 128, 1), {});
  const auto& planes = seg.sample_planes();
  ASSERT_EQ(planes.size(), std::size_t(kSmall.pixels()) * 20);
  EXPECT_GE(*std::min_element(planes.begin(), planes.end()), 118);
  EXPECT_LE(*std::max_element(planes.begin(), planes.end()), 138);
  // The noise is actually spread, not a constant offset.
  EXPECT_LT(*std::min_element(planes.begin(), planes.end()), 124);
  EXPECT_GT(*std::max_element(planes.begin(), planes.end()), 132);
  for (int p = 0; p < kSmall.pixels(); ++p) {
    EXPECT_EQ(seg.threshold(p), 18.0f);
    EXPECT_EQ(seg.update_period(p), 18.0f);
    EXPECT_EQ(seg.mean_min_distance(p), 0.0f);
  }
}

TEST(SegmenterInit, SamplesClampAtRangeEnds) {
  SegmenterConfig c;
  c.init_noise = 30;
  const Segmenter dark(constant_frame(kSmall, 5, 1), c), bright(constant_frame(kSmall, 250, 1), c);
  EXPECT_EQ(*std::min_element(dark.sample_planes().begin(), dark.sample_planes().end()), 0);
  EXPECT_EQ(*std::max_element(bright.sample_planes().begin(), bright.sample_planes().end()), 255);
}

TEST(SegmenterInit, SeedDeterminesModel) {
  const Frame f = frame_of(noise_plane(kSmall, 3), 1);
  SegmenterConfig a, b;
  b.rng_seed = 2;
  EXPECT_TRUE(Segmenter(f, a) == Segmenter(f, a));
  EXPECT_NE(Segmenter(f, a).sample_planes(), Segmenter(f, b).sample_planes());
}

TEST(SegmenterConfig, RejectsOutOfRangeConstants) {
  auto bad = [](auto mutate) {
    SegmenterConfig c;
    mutate(c);
    return thrown_code([&] { c.validate(); });
  };
  EXPECT_EQ(bad([](SegmenterConfig&) {}), std::nullopt);
  EXPECT_EQ(bad([](SegmenterConfig& c) { c.min_matches = 0; }), ErrorCode::InvalidConfig);
  EXPECT_EQ(bad([](SegmenterConfig& c) { c.min_matches = 21; }), ErrorCode::InvalidConfig);
  EXPECT_EQ(bad([](SegmenterConfig& c) { c.n_samples = 0; }), ErrorCode::InvalidConfig);
  EXPECT_EQ(bad([](SegmenterConfig& c) { c.r_init = 10; }), ErrorCode::InvalidConfig);
  EXPECT_EQ(bad([](SegmenterConfig& c) { c.t_lower = 0.5f; }), ErrorCode::InvalidConfig);
  EXPECT_EQ(bad([](SegmenterConfig& c) { c.r_adapt = 1.0f; }), ErrorCode::InvalidConfig);
  SegmenterConfig c;
  c.min_matches = 0;
  EXPECT_EQ(thrown_code([&] { Segmenter(constant_frame(kSmall, 1, 1), c); }), ErrorCode::InvalidConfig);
}

TEST(SegmenterClassify, IdenticalFrameIsAllBackground) {
  const Frame f = frame_of(noise_plane(kSmall, 4), 1);
  const Segmenter seg(f, {});
  EXPECT_EQ(seg.segment(f).count(), 0);
}

TEST(SegmenterClassify, LargeJumpIsForeground) {
  Plane p(kSmall, 128);
  const Segmenter seg(frame_of(p, 1), {});
  p.at(10, 7) = 250;
  const ForegroundMask m = seg.segment(frame_of(p, 2));
  EXPECT_EQ(m.count(), 1);
  EXPECT_TRUE(m.at(10, 7));
}

TEST(SegmenterClassify, MatchesDefinitionOnRandomModel) {
  Segmenter seg(frame_of(noise_plane(kSmall, 5), 1), {});
  for (int i = 2; i < 30; ++i) seg.step(frame_of(noise_plane(kSmall, std::uint64_t(i), 40, 80), i));
  const Frame probe = frame_of(noise_plane(kSmall, 99, 30, 100), 30);
  const ForegroundMask m = seg.segment(probe);
  const int n = seg.config().n_samples;
  for (int p = 0; p < kSmall.pixels(); ++p) {
    int matches = 0;
    for (int k = 0; k < n; ++k)
      matches += float(std::abs(int(seg.sample(p, k)) - int(probe.luma[std::size_t(p)]))) < seg.threshold(p);
    ASSERT_EQ(m.bits[std::size_t(p)], matches < seg.config().min_matches) << "pixel " << p;
  }
}

TEST(SegmenterClassify, DimsMismatch) {
  Segmenter seg(constant_frame(kSmall, 1, 1), {});
  const Frame other = constant_frame({10, 10}, 1, 2);
  EXPECT_EQ(thrown_code([&] { seg.segment(other); }), ErrorCode::DimsMismatch);
  EXPECT_EQ(thrown_code([&] { seg.update_model(constant_frame(kSmall, 1, 2), ForegroundMask({3, 3})); }),
            ErrorCode::DimsMismatch);
}

TEST(SegmenterUpdate, SelfUpdateRateIsOneOverT) {
  SegmenterConfig c;
  c.t_init = c.t_lower = c.t_upper = 200;
  const FrameDims dims{64, 64};
  Segmenter seg(constant_frame(dims, 100, 1), c);
  std::int64_t self = 0, neighbor = 0;
  const int frames = 200;
  for (int i = 2; i < 2 + frames; ++i) {
    UpdateStats s;
    const ForegroundMask m = seg.step(constant_frame(dims, 100, i), &s);
    ASSERT_EQ(m.count(), 0);
    self += s.self_updates;
    neighbor += s.neighbor_updates;
  }
  const double expected = double(dims.pixels()) * frames / 200.0;
  EXPECT_NEAR(double(self), expected, 0.1 * expected);
  EXPECT_NEAR(double(neighbor), expected, 0.1 * expected);
}

TEST(SegmenterUpdate, ForegroundPixelsKeepTheirSamples) {
  Segmenter seg(frame_of(noise_plane(kSmall, 6), 1), {});
  const auto before = seg.sample_planes();
  ForegroundMask all(kSmall);
  std::fill(all.bits.begin(), all.bits.end(), 1);
  for (int i = 2; i < 40; ++i) seg.update_model(constant_frame(kSmall, 255, i), all);
  EXPECT_EQ(seg.sample_planes(), before);
}

TEST(SegmenterUpdate, ForegroundRaisesAndBackgroundLowersPeriod) {
  SegmenterConfig c;
  c.t_init = 50;
  Segmenter seg(constant_frame(kSmall, 100, 1), c);
  ForegroundMask half(kSmall);
  for (int x = 0; x < kSmall.width / 2; ++x)
    for (int y = 0; y < kSmall.height; ++y) half.set(x, y);
  seg.update_model(constant_frame(kSmall, 100, 2), half);
  EXPECT_GT(seg.update_period(0), 50.0f);
  EXPECT_LT(seg.update_period(kSmall.width - 1), 50.0f);
}

TEST(SegmenterUpdate, ThresholdConvergesToLowerBoundOnStaticScene) {
  SegmenterConfig c;
  c.r_init = 60;
  Segmenter seg(constant_frame(kSmall, 90, 1), c);
  for (int i = 2; i < 80; ++i) seg.step(constant_frame(kSmall, 90, i));
  for (float r : seg.thresholds()) ASSERT_EQ(r, c.r_lower);
}

TEST(SegmenterUpdate, ThresholdAndPeriodStayInBounds) {
  SegmenterConfig c;
  c.r_init = 40;
  c.r_upper = 90;
  c.t_upper = 60;
  c.t_inc = 7;
  c.t_dec = 3;
  Segmenter seg(frame_of(noise_plane(kSmall, 7), 1), c);
  for (int i = 2; i < 120; ++i) {
    // Alternate calm texture and wild jumps so both bounds are pushed.
    const Plane p = i % 7 < 3 ? noise_plane(kSmall, std::uint64_t(i), 0, 256) : noise_plane(kSmall, 7);
    seg.step(frame_of(p, i));
    for (int px = 0; px < kSmall.pixels(); ++px) {
      ASSERT_GE(seg.threshold(px), c.r_lower);
      ASSERT_LE(seg.threshold(px), c.r_upper);
      ASSERT_GE(seg.update_period(px), c.t_lower);
      ASSERT_LE(seg.update_period(px), c.t_upper);
    }
  }
}

TEST(SegmenterUpdate, StepEqualsSegmentThenUpdate) {
  const Frame first = frame_of(noise_plane(kSmall, 8), 1);
  Segmenter a(first, {}), b(first, {});
  for (int i = 2; i < 40; ++i) {
    Plane p = noise_plane(kSmall, 8);
    testing::fill_rect(p, {i % 30, 10, 12, 12}, 230);
    const Frame f = frame_of(p, i);
    const ForegroundMask ma = a.step(f);
    const ForegroundMask mb = b.segment(f);
    b.update_model(f, mb);
    ASSERT_EQ(ma, mb) << "frame " << i;
    ASSERT_TRUE(a == b) << "frame " << i;
  }
}

TEST(SegmenterUpdate, RunsAreReproducible) {
  auto run = [](std::uint64_t seed) {
    SegmenterConfig c;
    c.rng_seed = seed;
    Segmenter seg(frame_of(noise_plane(kSmall, 9), 1), c);
    std::vector<ForegroundMask> masks;
    for (int i = 2; i < 60; ++i) {
      Plane p = noise_plane(kSmall, std::uint64_t(i) * 31);
      testing::fill_rect(p, {i % 40, 5, 8, 8}, 240);
      masks.push_back(seg.step(frame_of(p, i)));
    }
    return std::make_pair(masks, seg.sample_planes());
  };
  EXPECT_EQ(run(1), run(1));
  EXPECT_NE(run(1).second, run(2).second);
}

TEST(SegmenterParams, ClampsIdentityAndFixedSampleCount) {
  SegmenterConfig c;
  c.r_init = 80;
  c.t_init = 150;
  Segmenter seg(frame_of(noise_plane(kSmall, 10), 1), c);
  seg.step(frame_of(noise_plane(kSmall, 11), 2));

  Segmenter same = seg;
  same.set_params(same.config());
  EXPECT_TRUE(same == seg);

  SegmenterConfig tighter = c;
  tighter.r_init = 30;
  tighter.r_upper = 30;
  tighter.t_init = 20;
  tighter.t_upper = 20;
  seg.set_params(tighter);
  for (float r : seg.thresholds()) ASSERT_LE(r, 30.0f);
  for (float t : seg.update_periods()) ASSERT_LE(t, 20.0f);
  EXPECT_EQ(seg.config(), tighter);

  SegmenterConfig other_n = c;
  other_n.n_samples = 21;
  EXPECT_EQ(thrown_code([&] { seg.set_params(other_n); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(seg.config(), tighter);
}

TEST(SegmenterSnapshot, RoundTrip) {
  testing::TempDir dir;
  Segmenter seg(frame_of(noise_plane(kSmall, 12), 1), {});
  for (int i = 2; i < 10; ++i) seg.step(frame_of(noise_plane(kSmall, std::uint64_t(i)), i));
  seg.write_snapshot(dir / "s.bin");
  const SegmenterSnapshot snap = read_snapshot(dir / "s.bin");
  EXPECT_EQ(snap.dims, kSmall);
  ASSERT_EQ(snap.n_samples, 20);
  EXPECT_EQ(snap.radius, seg.thresholds());
  EXPECT_EQ(snap.period, seg.update_periods());
  EXPECT_EQ(snap.dmin_avg, seg.mean_min_distances());
  for (int p = 0; p < kSmall.pixels(); ++p)
    for (int k = 0; k < 20; ++k) ASSERT_EQ(snap.samples[std::size_t(p) * 20 + k], seg.sample(p, k));

  std::string bytes = testing::read_file(dir / "s.bin");
  EXPECT_EQ(bytes.size(), 20 + std::size_t(kSmall.pixels()) * 32);
  bytes.pop_back();
  { std::ofstream(dir / "t.bin", std::ios::binary) << bytes; }
  EXPECT_EQ(thrown_code([&] { read_snapshot(dir / "t.bin"); }), ErrorCode::TruncatedStream);
  { std::ofstream(dir / "m.bin", std::ios::binary) << "not a snapshot at all"; }
  EXPECT_EQ(thrown_code([&] { read_snapshot(dir / "m.bin"); }), ErrorCode::MalformedImage);
}

// FNV-1a over a full run's masks and final model.
std::uint64_t run_digest() {
  const FrameDims dims{97, 61};
  Segmenter seg(frame_of(noise_plane(dims, 13), 1), {});
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) h = (h ^ p[i]) * 0x100000001b3ull;
  };
  for (int i = 2; i < 80; ++i) {
    Plane p = noise_plane(dims, std::uint64_t(i), 50, 30);
    testing::fill_rect(p, {i, 20, 14, 14}, 220);
    const ForegroundMask m = seg.step(frame_of(p, i));
    mix(m.bits.data(), m.bits.size());
  }
  mix(seg.sample_planes().data(), seg.sample_planes().size());
  mix(seg.thresholds().data(), seg.thresholds().size() * sizeof(float));
  mix(seg.update_periods().data(), seg.update_periods().size() * sizeof(float));
  return h;
}

// Child side of the cross-variant check below: prints the digest computed
// with whatever kernels the environment selected.
TEST(SegmenterSimd, DISABLED_DigestChild) {
  if (!std::getenv("EDGETRACK_DIGEST_CHILD")) GTEST_SKIP() << "helper for VariantsProduceIdenticalRuns";
  std::printf("DIGEST %s %016llx\n", std::string(to_string(simd::active_kernels().isa)).c_str(),
              static_cast<unsigned long long>(run_digest()));
}

TEST(SegmenterSimd, VariantsProduceIdenticalRuns) {
  if (std::getenv("EDGETRACK_DIGEST_CHILD")) GTEST_SKIP();
  // Kernel selection is fixed per process, so each variant runs in a child.
  std::set<std::string> digests;
  for (const simd::Isa isa : simd::available_isas()) {
    const std::string cmd = "EDGETRACK_DIGEST_CHILD=1 EDGETRACK_SIMD=" + std::string(to_string(isa)) +
                            " /proc/" + std::to_string(getpid()) +
                            "/exe --gtest_also_run_disabled_tests --gtest_filter=SegmenterSimd.DISABLED_DigestChild";
    FILE* pipe = popen(cmd.c_str(), "r");
    ASSERT_NE(pipe, nullptr);
    char line[256];
    std::string digest;
    while (std::fgets(line, sizeof line, pipe))
      if (std::string(line).rfind("DIGEST ", 0) == 0) digest = line;
    ASSERT_EQ(pclose(pipe), 0) << cmd;
    ASSERT_FALSE(digest.empty()) << cmd;
    EXPECT_EQ(digest.substr(7, digest.find(' ', 7) - 7), to_string(isa)) << "override ignored";
    digests.insert(digest.substr(digest.rfind(' ') + 1));
  }
  EXPECT_EQ(digests.size(), 1u);
}

}  // namespace
}  // namespace edgetrack
