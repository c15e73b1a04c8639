#include "edgetrack/segmenter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "edgetrack/error.hpp"
#include "edgetrack/rng.hpp"
#include "edgetrack/simd/kernels.hpp"

namespace edgetrack {

namespace {

// Stream tags keep initialization and update draws independent.
constexpr std::uint64_t kInitStream = 0x1000;
constexpr std::uint64_t kUpdateStream = 0x2000;

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, what);
}

// For an integer distance d, d < R  <=>  d < ceil(R). R lies in (0, 255],
// and the truncate-and-compare form vectorizes where ceil does not.
std::uint8_t integer_limit(float radius) {
  const int t = int(radius);
  return std::uint8_t(t + (float(t) < radius));
}

}  // namespace

void SegmenterConfig::validate() const {
  if (n_samples < 1 || n_samples > 255) invalid("n_samples must be in [1, 255]");
  if (min_matches < 1 || min_matches > n_samples) invalid("min_matches must be in [1, n_samples]");
  if (!(r_lower > 0 && r_lower <= r_init && r_init <= r_upper && r_upper <= 255))
    invalid("need 0 < r_lower <= r_init <= r_upper <= 255");
  if (!(t_lower >= 1 && t_lower <= t_init && t_init <= t_upper))
    invalid("need 1 <= t_lower <= t_init <= t_upper");
  if (!(r_scale > 0)) invalid("r_scale must be positive");
  if (!(r_adapt >= 0 && r_adapt < 1)) invalid("r_adapt must be in [0, 1)");
  if (!(t_inc >= 0 && t_dec >= 0)) invalid("t_inc and t_dec must be non-negative");
  if (init_noise < 0 || init_noise > 255) invalid("init_noise must be in [0, 255]");
}

std::int64_t ForegroundMask::count() const {
  return std::int64_t(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

Segmenter::Segmenter(const Frame& first_frame, const SegmenterConfig& config)
    : config_(config), dims_(first_frame.dims) {
  config_.validate();
  if (!dims_.valid() || first_frame.luma.size() != plane_size())
    throw Error(ErrorCode::DimsMismatch, "first frame luma plane does not match its dims");

  const std::size_t n_pixels = plane_size();
  const int n = config_.n_samples;
  const int spread = 2 * config_.init_noise + 1;
  samples_.resize(n_pixels * n);
  for (std::size_t i = 0; i < n_pixels; ++i) {
    KeyedRng rng(config_.rng_seed, kInitStream, i);
    const int value = first_frame.luma[i];
    for (int k = 0; k < n; ++k) {
      const int noise = int(rng.below(std::uint32_t(spread))) - config_.init_noise;
      samples_[std::size_t(k) * n_pixels + i] = std::uint8_t(std::clamp(value + noise, 0, 255));
    }
  }
  radius_.assign(n_pixels, config_.r_init);
  period_.assign(n_pixels, config_.t_init);
  dmin_avg_.assign(n_pixels, 0.0f);
}

void Segmenter::check_dims(const Frame& frame) const {
  if (!(frame.dims == dims_) || frame.luma.size() != plane_size())
    throw Error(ErrorCode::DimsMismatch, "frame " + std::to_string(frame.index) + " is " +
                                             std::to_string(frame.dims.width) + "x" +
                                             std::to_string(frame.dims.height) + ", model is " +
                                             std::to_string(dims_.width) + "x" +
                                             std::to_string(dims_.height));
}

void Segmenter::match_stats(const Frame& frame, std::vector<std::uint8_t>& counts,
                            std::vector<std::uint8_t>& min_distance) const {
  const std::size_t n_pixels = plane_size();
  std::vector<std::uint8_t> limits(n_pixels);
  std::transform(radius_.begin(), radius_.end(), limits.begin(), integer_limit);
  counts.resize(n_pixels);
  min_distance.resize(n_pixels);
  simd::active_kernels().sample_match({samples_.data(), n_pixels, config_.n_samples, frame.luma.data(),
                                       limits.data(), counts.data(), min_distance.data(), n_pixels});
}

ForegroundMask Segmenter::classify(const std::vector<std::uint8_t>& counts) const {
  ForegroundMask mask(dims_);
  const int needed = config_.min_matches;
  for (std::size_t i = 0; i < counts.size(); ++i) mask.bits[i] = counts[i] < needed;
  return mask;
}

ForegroundMask Segmenter::segment(const Frame& frame) const {
  check_dims(frame);
  std::vector<std::uint8_t> counts, min_distance;
  match_stats(frame, counts, min_distance);
  return classify(counts);
}

ForegroundMask Segmenter::step(const Frame& frame, UpdateStats* stats) {
  check_dims(frame);
  std::vector<std::uint8_t> counts, min_distance;
  match_stats(frame, counts, min_distance);
  ForegroundMask mask = classify(counts);
  const UpdateStats s = apply_update(frame, mask, min_distance);
  if (stats) *stats = s;
  return mask;
}

UpdateStats Segmenter::update_model(const Frame& frame, const ForegroundMask& mask) {
  check_dims(frame);
  if (!(mask.dims == dims_) || mask.bits.size() != plane_size())
    throw Error(ErrorCode::DimsMismatch, "mask does not match model dims");

  std::vector<std::uint8_t> counts, min_distance;
  match_stats(frame, counts, min_distance);
  return apply_update(frame, mask, min_distance);
}

UpdateStats Segmenter::apply_update(const Frame& frame, const ForegroundMask& mask,
                                    const std::vector<std::uint8_t>& min_distance) {
  const std::size_t n_pixels = plane_size();
  const int width = dims_.width;
  const int height = dims_.height;
  const auto n = std::uint32_t(config_.n_samples);
  const float alpha = 1.0f / float(config_.n_samples);
  UpdateStats stats;

  // Random sample replacement; decisions use the period from before this
  // frame's adaptation below.
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t i = std::size_t(y) * width + x;
      if (mask.bits[i]) continue;
      KeyedRng rng(config_.rng_seed, kUpdateStream ^ std::uint64_t(frame.index), i);
      const double rate = 1.0 / double(period_[i]);
      if (rng.uniform() < rate) {
        samples_[rng.below(n) * n_pixels + i] = frame.luma[i];
        ++stats.self_updates;
      }
      if (rng.uniform() < rate) {
        int offsets[8];
        int n_neighbors = 0;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if ((dx == 0 && dy == 0) || x + dx < 0 || x + dx >= width || y + dy < 0 || y + dy >= height)
              continue;
            offsets[n_neighbors++] = dy * width + dx;
          }
        }
        if (n_neighbors > 0) {
          const std::size_t j = std::size_t(std::ptrdiff_t(i) + offsets[rng.below(std::uint32_t(n_neighbors))]);
          samples_[rng.below(n) * n_pixels + j] = frame.luma[j];
          ++stats.neighbor_updates;
        }
      }
    }
  }

  // Branch-free per-pixel adaptation of dmin_avg, R and T.
  const float r_grow = 1.0f + config_.r_adapt, r_shrink = 1.0f - config_.r_adapt;
  for (std::size_t i = 0; i < n_pixels; ++i) {
    const float avg = (1.0f - alpha) * dmin_avg_[i] + alpha * float(min_distance[i]);
    dmin_avg_[i] = avg;
    const float radius = radius_[i];
    const float scaled = radius > avg * config_.r_scale ? radius * r_shrink : radius * r_grow;
    radius_[i] = std::clamp(scaled, config_.r_lower, config_.r_upper);
    const float damping = std::max(avg, 1.0f);
    const float period = period_[i];
    const float next = mask.bits[i] ? period + config_.t_inc / damping : period - config_.t_dec / damping;
    period_[i] = std::clamp(next, config_.t_lower, config_.t_upper);
  }
  return stats;
}

void Segmenter::set_params(const SegmenterConfig& config) {
  config.validate();
  if (config.n_samples != config_.n_samples)
    invalid("n_samples cannot change on a live model (" + std::to_string(config_.n_samples) + " -> " +
            std::to_string(config.n_samples) + ")");
  config_ = config;
  for (float& r : radius_) r = std::clamp(r, config_.r_lower, config_.r_upper);
  for (float& t : period_) t = std::clamp(t, config_.t_lower, config_.t_upper);
}

}  // namespace edgetrack
