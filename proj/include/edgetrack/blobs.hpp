#pragma once

#include <cstdint>
#include <vector>

#include "edgetrack/box.hpp"
#include "edgetrack/segmenter.hpp"

namespace edgetrack {

struct Component {
  BoundingBox box;
  std::int64_t pixel_count = 0;
  std::vector<int> pixels;  // row-major linear indices, ascending
};

struct Detection {
  BoundingBox box;
  std::int64_t pixel_count = 0;
  std::int64_t frame_index = 0;
  friend bool operator==(const Detection&, const Detection&) = default;
};

struct BlobConfig {
  std::int64_t min_area = 100;
  std::int64_t max_area = 28800;
  int border_margin = 8;
  int connectivity = 8;

  void validate() const;
  friend bool operator==(const BlobConfig&, const BlobConfig&) = default;
};

// Maximal connected foreground regions, ordered by their first pixel in
// row-major scan order. connectivity is 4 or 8.
std::vector<Component> label_components(const ForegroundMask& mask, int connectivity);

// Components whose pixel count lies in [min_area, max_area] and whose box
// keeps at least border_margin pixels from every frame edge, ordered by the
// (y, x) of the box corner.
std::vector<Detection> extract_detections(const ForegroundMask& mask, const BlobConfig& config,
                                          std::int64_t frame_index);

}  // namespace edgetrack
