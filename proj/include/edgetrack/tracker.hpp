#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "edgetrack/box.hpp"
#include "edgetrack/frame.hpp"

namespace edgetrack {

// Frame region covered by a crop, plus the crop resampled to its output size.
struct Crop {
  BoundingBox region;
  Plane patch;
};

// Box scaled by context_factor about its center, clamped to the frame, then
// nearest-neighbor resampled to out_size. Throws Error(OutOfFrame).
Crop crop_patch(const Frame& frame, const BoundingBox& box, double context_factor, FrameDims out_size);

// Same region selection, interleaved RGB output (luma replicated when the
// frame has no color plane).
struct RgbCrop {
  BoundingBox region;
  FrameDims dims;
  std::vector<std::uint8_t> rgb;
};
RgbCrop crop_patch_rgb(const Frame& frame, const BoundingBox& box, double context_factor, FrameDims out_size);

// Patch-in, box-out inference contract for a learned regression tracker.
class BoxRegressor {
 public:
  virtual ~BoxRegressor() = default;
  virtual FrameDims input_size() const = 0;
  // target: previous-frame crop around the last box; search: current-frame
  // crop of the same region. Returns (x1, y1, x2, y2) as fractions of the
  // search crop. Implementations must be safe to call concurrently.
  virtual std::array<float, 4> regress(const RgbCrop& target, const RgbCrop& search) = 0;
};

// Loads a model by path (ONNX, or Caffe with a sibling .prototxt). Throws
// Error(ModelLoadFailure) when the file is missing or no backend is built.
std::shared_ptr<BoxRegressor> load_regressor(const std::filesystem::path& model_path);

struct TrackerKind {
  enum class Type { CorrelationFallback, LearnedRegressor };
  Type type = Type::CorrelationFallback;
  std::filesystem::path model_path;

  static TrackerKind fallback() { return {}; }
  static TrackerKind learned(std::filesystem::path path) { return {Type::LearnedRegressor, std::move(path)}; }
  // "fallback" or "model:<path>"
  static TrackerKind parse(const std::string& text);
  std::string to_string() const;
  friend bool operator==(const TrackerKind&, const TrackerKind&) = default;
};

struct TrackerOptions {
  TrackerKind kind;
  double context_factor = 2.0;
  // Context ring around the box kept in the correlation template.
  int template_pad = 4;
  int min_box_side = 4;
};

class SingleObjectTracker {
 public:
  virtual ~SingleObjectTracker() = default;
  // Estimates the target box in `frame`, stores it and returns it.
  // Throws Error(DegenerateSearchRegion) when the search region collapses.
  virtual BoundingBox step(const Frame& frame) = 0;
  virtual BoundingBox last_box() const = 0;
};

// Builds trackers of one kind, holding a shared model handle for the
// learned variant so every track reuses the same loaded network.
class TrackerFactory {
 public:
  // Throws Error(ModelLoadFailure) for an unreadable model.
  explicit TrackerFactory(TrackerOptions options);
  TrackerFactory(TrackerOptions options, std::shared_ptr<BoxRegressor> regressor);

  // Throws Error(BoxTooSmall) or Error(OutOfFrame).
  std::unique_ptr<SingleObjectTracker> init(const Frame& frame, const BoundingBox& box) const;

  const TrackerOptions& options() const { return options_; }

 private:
  TrackerOptions options_;
  std::shared_ptr<BoxRegressor> regressor_;
};

std::unique_ptr<SingleObjectTracker> tracker_init(const Frame& frame, const BoundingBox& box,
                                                  const TrackerKind& kind);

// Correlation fallback, exposed for direct testing.
class CorrelationTracker : public SingleObjectTracker {
 public:
  CorrelationTracker(const Frame& frame, const BoundingBox& box, const TrackerOptions& options);

  BoundingBox step(const Frame& frame) override;
  BoundingBox last_box() const override { return box_; }

  const Plane& appearance() const { return template_; }
  const BoundingBox& template_region() const { return template_rect_; }
  double last_score() const { return last_score_; }

  // Normalized cross-correlation of the template against `frame` with the
  // box displaced by (dx, dy); the overlap is clipped to the frame.
  double score_at(const Frame& frame, int dx, int dy) const;

  // Displacement bounds that keep the box inside the search region.
  struct SearchWindow {
    BoundingBox region;
    int dx_min, dx_max, dy_min, dy_max;
  };
  SearchWindow search_window(FrameDims dims) const;

 private:
  void capture(const Frame& frame);

  TrackerOptions options_;
  BoundingBox box_;
  BoundingBox template_rect_;
  Plane template_;
  double last_score_ = 0.0;
};

// Zero-mean normalized cross-correlation from exact integer moments; 0 when
// either side is flat.
double ncc_from_moments(std::uint64_t n, std::uint64_t sum_t, std::uint64_t sum_tt, std::uint64_t sum_p,
                        std::uint64_t sum_pp, std::uint64_t sum_tp);

}  // namespace edgetrack
