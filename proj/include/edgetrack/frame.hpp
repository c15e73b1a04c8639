#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "edgetrack/box.hpp"

namespace edgetrack {

// Row-major 8-bit single plane.
struct Plane {
  FrameDims dims;
  std::vector<std::uint8_t> data;

  Plane() = default;
  explicit Plane(FrameDims d, std::uint8_t fill = 0)
      : dims(d), data(std::size_t(d.pixels()), fill) {}

  std::uint8_t& at(int x, int y) { return data[std::size_t(y) * dims.width + x]; }
  std::uint8_t at(int x, int y) const { return data[std::size_t(y) * dims.width + x]; }
  const std::uint8_t* row(int y) const { return data.data() + std::size_t(y) * dims.width; }
  std::uint8_t* row(int y) { return data.data() + std::size_t(y) * dims.width; }
  friend bool operator==(const Plane&, const Plane&) = default;
};

struct Frame {
  FrameDims dims;
  std::vector<std::uint8_t> luma;
  // Interleaved RGB when the source carries color.
  std::optional<std::vector<std::uint8_t>> color;
  std::int64_t index = 0;
  std::chrono::nanoseconds timestamp{0};

  Plane luma_plane() const {
    Plane p(dims);
    p.data = luma;
    return p;
  }
  std::uint8_t at(int x, int y) const { return luma[std::size_t(y) * dims.width + x]; }
};

inline Frame make_frame(Plane luma, std::int64_t index) {
  Frame f;
  f.dims = luma.dims;
  f.luma = std::move(luma.data);
  f.index = index;
  return f;
}

// Integer BT.601 luma.
inline std::uint8_t rgb_to_luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return std::uint8_t((77 * r + 150 * g + 29 * b) >> 8);
}

// Single-consumer pull interface. nullopt is end of stream and is sticky.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual std::optional<Frame> next() = 0;
  // Nominal capture rate when the container records one.
  virtual std::optional<double> nominal_fps() const { return std::nullopt; }
  // Frame count when known up front.
  virtual std::optional<std::int64_t> size_hint() const { return std::nullopt; }
};

// Replays an in-memory list of frames; used for synthetic scenes and tests.
class VectorSource : public FrameSource {
 public:
  explicit VectorSource(std::vector<Frame> frames) : frames_(std::move(frames)) {}
  std::optional<Frame> next() override;
  std::optional<std::int64_t> size_hint() const override { return std::int64_t(frames_.size()); }

 private:
  std::vector<Frame> frames_;
  std::size_t pos_ = 0;
};

std::unique_ptr<FrameSource> open_image_sequence(const std::filesystem::path& dir,
                                                 const std::string& pattern = "");

std::unique_ptr<FrameSource> open_y4m(const std::filesystem::path& path);

// Directory -> image sequence, *.y4m -> YUV4MPEG2.
std::unique_ptr<FrameSource> open_source(const std::filesystem::path& path);

// Releases frames from an inner source no faster than `fps`, the way a live
// camera delivers them. Used to replay files under live-source semantics.
class PacedSource : public FrameSource {
 public:
  PacedSource(std::unique_ptr<FrameSource> inner, double fps);
  std::optional<Frame> next() override;
  std::optional<double> nominal_fps() const override { return fps_; }
  std::optional<std::int64_t> size_hint() const override { return inner_->size_hint(); }

 private:
  std::unique_ptr<FrameSource> inner_;
  double fps_;
  std::int64_t emitted_ = 0;
  std::optional<std::chrono::steady_clock::time_point> start_;
};

}  // namespace edgetrack
