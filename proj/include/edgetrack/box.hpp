#pragma once

#include <cstdint>
#include <ostream>

namespace edgetrack {

struct FrameDims {
  int width = 320;
  int height = 240;

  std::int64_t pixels() const { return std::int64_t(width) * height; }
  bool valid() const { return width >= 1 && height >= 1; }
  friend bool operator==(const FrameDims&, const FrameDims&) = default;
};

inline constexpr FrameDims kQvga{320, 240};

// Corner + size, half-open extent [x, x+w) x [y, y+h).
struct BoundingBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  int right() const { return x + w; }
  int bottom() const { return y + h; }
  bool empty() const { return w <= 0 || h <= 0; }
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

std::ostream& operator<<(std::ostream& os, const BoundingBox& b);

std::int64_t area(const BoundingBox& b);

// Empty box (w = h = 0) when disjoint.
BoundingBox intersect(const BoundingBox& a, const BoundingBox& b);

// Exact IoU as an integer fraction; comparisons cross-multiply so ordering
// never depends on floating-point rounding.
struct IouRatio {
  std::int64_t intersection = 0;
  std::int64_t union_area = 1;

  double value() const {
    return union_area == 0 ? 0.0 : double(intersection) / double(union_area);
  }
  friend bool operator==(const IouRatio& a, const IouRatio& b) {
    return a.intersection * b.union_area == b.intersection * a.union_area;
  }
  friend bool operator<(const IouRatio& a, const IouRatio& b) {
    return a.intersection * b.union_area < b.intersection * a.union_area;
  }
};

IouRatio iou_ratio(const BoundingBox& a, const BoundingBox& b);
double iou(const BoundingBox& a, const BoundingBox& b);

int border_distance(const BoundingBox& b, const FrameDims& dims);

// Throws Error(OutOfFrame) when the box misses the frame entirely.
BoundingBox clamp_to_frame(const BoundingBox& b, const FrameDims& dims);

bool inside_frame(const BoundingBox& b, const FrameDims& dims);

// Box scaled by `factor` about its center, rounded outward to whole pixels.
BoundingBox scale_about_center(const BoundingBox& b, double factor);

}  // namespace edgetrack
