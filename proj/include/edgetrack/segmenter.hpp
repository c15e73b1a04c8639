#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "edgetrack/box.hpp"
#include "edgetrack/frame.hpp"

namespace edgetrack {

struct SegmenterConfig {
  int n_samples = 20;
  int min_matches = 2;
  float r_init = 18.0f;
  float r_lower = 18.0f;
  float r_upper = 255.0f;
  float r_scale = 5.0f;
  float r_adapt = 0.05f;
  float t_init = 18.0f;
  float t_lower = 2.0f;
  float t_upper = 200.0f;
  float t_inc = 1.0f;
  float t_dec = 0.05f;
  std::uint64_t rng_seed = 1;
  // Half-width of the uniform noise used to spread the initial samples.
  int init_noise = 10;

  // Throws Error(InvalidConfig) describing the first violated bound.
  void validate() const;
  friend bool operator==(const SegmenterConfig&, const SegmenterConfig&) = default;
};

struct ForegroundMask {
  FrameDims dims;
  std::vector<std::uint8_t> bits;  // 1 = foreground

  ForegroundMask() = default;
  explicit ForegroundMask(FrameDims d) : dims(d), bits(std::size_t(d.pixels()), 0) {}
  bool at(int x, int y) const { return bits[std::size_t(y) * dims.width + x] != 0; }
  void set(int x, int y, bool fg = true) { bits[std::size_t(y) * dims.width + x] = fg; }
  std::int64_t count() const;
  friend bool operator==(const ForegroundMask&, const ForegroundMask&) = default;
};

struct UpdateStats {
  std::int64_t self_updates = 0;
  std::int64_t neighbor_updates = 0;
};

// Per-pixel background model: a bank of intensity samples plus an adaptive
// decision threshold R and update period T for every pixel.
class Segmenter {
 public:
  // Seeds the model from the first frame.
  Segmenter(const Frame& first_frame, const SegmenterConfig& config);

  // Pure classification: background iff at least min_matches samples lie
  // strictly closer than R(x). Throws Error(DimsMismatch).
  ForegroundMask segment(const Frame& frame) const;

  // Conservative update: only background pixels refresh their own bank, and
  // diffuse their current value into a random neighbor's bank. Then adapts
  // the running minimal distance, R and T of every pixel.
  UpdateStats update_model(const Frame& frame, const ForegroundMask& mask);

  // segment followed by update_model, sharing one pass of sample matching.
  ForegroundMask step(const Frame& frame, UpdateStats* stats = nullptr);

  // Swaps the constants; N must stay fixed. Re-clamps R and T into the new bounds.
  void set_params(const SegmenterConfig& config);

  const SegmenterConfig& config() const { return config_; }
  FrameDims dims() const { return dims_; }

  std::uint8_t sample(int pixel, int k) const { return samples_[std::size_t(k) * plane_size() + pixel]; }
  float threshold(int pixel) const { return radius_[std::size_t(pixel)]; }
  float update_period(int pixel) const { return period_[std::size_t(pixel)]; }
  float mean_min_distance(int pixel) const { return dmin_avg_[std::size_t(pixel)]; }

  const std::vector<std::uint8_t>& sample_planes() const { return samples_; }
  const std::vector<float>& thresholds() const { return radius_; }
  const std::vector<float>& update_periods() const { return period_; }
  const std::vector<float>& mean_min_distances() const { return dmin_avg_; }

  // Little-endian dump: "ETSEG001", u32 width, u32 height, u32 N, then for each
  // pixel in row-major order N u8 samples, f32 R, f32 T, f32 dmin_avg.
  void write_snapshot(const std::filesystem::path& path) const;

  friend bool operator==(const Segmenter& a, const Segmenter& b) {
    return a.dims_ == b.dims_ && a.samples_ == b.samples_ && a.radius_ == b.radius_ &&
           a.period_ == b.period_ && a.dmin_avg_ == b.dmin_avg_;
  }

 private:
  std::size_t plane_size() const { return std::size_t(dims_.pixels()); }
  void check_dims(const Frame& frame) const;
  void match_stats(const Frame& frame, std::vector<std::uint8_t>& counts,
                   std::vector<std::uint8_t>& min_distance) const;
  ForegroundMask classify(const std::vector<std::uint8_t>& counts) const;
  UpdateStats apply_update(const Frame& frame, const ForegroundMask& mask,
                           const std::vector<std::uint8_t>& min_distance);

  SegmenterConfig config_;
  FrameDims dims_;
  std::vector<std::uint8_t> samples_;  // N planes of width*height
  std::vector<float> radius_;
  std::vector<float> period_;
  std::vector<float> dmin_avg_;
};

struct SegmenterSnapshot {
  FrameDims dims;
  int n_samples = 0;
  std::vector<std::uint8_t> samples;  // pixel-major: samples[pixel * N + k]
  std::vector<float> radius;
  std::vector<float> period;
  std::vector<float> dmin_avg;
};

SegmenterSnapshot read_snapshot(const std::filesystem::path& path);

}  // namespace edgetrack
