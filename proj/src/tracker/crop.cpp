#include "edgetrack/error.hpp"
#include "edgetrack/tracker.hpp"

namespace edgetrack {

namespace {

BoundingBox context_region(const Frame& frame, const BoundingBox& box, double context_factor) {
  if (box.empty()) throw Error(ErrorCode::OutOfFrame, "empty box");
  return clamp_to_frame(scale_about_center(box, context_factor), frame.dims);
}

// Nearest-neighbor source coordinate for output index `o` of `out` samples
// spread over `extent` source pixels starting at `origin`.
int nearest(int origin, int extent, int o, int out) {
  return origin + int((std::int64_t(o) * extent) / out);
}

}  // namespace

Crop crop_patch(const Frame& frame, const BoundingBox& box, double context_factor, FrameDims out_size) {
  if (!out_size.valid()) throw Error(ErrorCode::InvalidConfig, "crop output size must be positive");
  Crop crop{context_region(frame, box, context_factor), Plane(out_size)};
  for (int oy = 0; oy < out_size.height; ++oy) {
    const int sy = nearest(crop.region.y, crop.region.h, oy, out_size.height);
    for (int ox = 0; ox < out_size.width; ++ox)
      crop.patch.at(ox, oy) = frame.at(nearest(crop.region.x, crop.region.w, ox, out_size.width), sy);
  }
  return crop;
}

RgbCrop crop_patch_rgb(const Frame& frame, const BoundingBox& box, double context_factor, FrameDims out_size) {
  if (!out_size.valid()) throw Error(ErrorCode::InvalidConfig, "crop output size must be positive");
  RgbCrop crop{context_region(frame, box, context_factor), out_size, {}};
  crop.rgb.resize(std::size_t(out_size.pixels()) * 3);
  for (int oy = 0; oy < out_size.height; ++oy) {
    const int sy = nearest(crop.region.y, crop.region.h, oy, out_size.height);
    for (int ox = 0; ox < out_size.width; ++ox) {
      const int sx = nearest(crop.region.x, crop.region.w, ox, out_size.width);
      const std::size_t src = std::size_t(sy) * frame.dims.width + sx;
      std::uint8_t* dst = &crop.rgb[(std::size_t(oy) * out_size.width + ox) * 3];
      if (frame.color) {
        dst[0] = (*frame.color)[3 * src];
        dst[1] = (*frame.color)[3 * src + 1];
        dst[2] = (*frame.color)[3 * src + 2];
      } else {
        dst[0] = dst[1] = dst[2] = frame.luma[src];
      }
    }
  }
  return crop;
}

}  // namespace edgetrack
