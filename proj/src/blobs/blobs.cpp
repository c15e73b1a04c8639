#include "edgetrack/blobs.hpp"

#include <algorithm>
#include <numeric>

#include "edgetrack/error.hpp"

namespace edgetrack {

namespace {

class DisjointSet {
 public:
  int make() {
    parent_.push_back(int(parent_.size()));
    return parent_.back();
  }
  int find(int a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // smaller root wins so the representative is the earliest label
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace

void BlobConfig::validate() const {
  if (!(0 < min_area && min_area <= max_area))
    throw Error(ErrorCode::InvalidConfig, "blobs need 0 < min_area <= max_area");
  if (border_margin < 0) throw Error(ErrorCode::InvalidConfig, "border_margin must be >= 0");
  if (connectivity != 4 && connectivity != 8)
    throw Error(ErrorCode::InvalidConfig, "connectivity must be 4 or 8");
}

std::vector<Component> label_components(const ForegroundMask& mask, int connectivity) {
  if (connectivity != 4 && connectivity != 8)
    throw Error(ErrorCode::InvalidConfig, "connectivity must be 4 or 8");
  const int width = mask.dims.width;
  const int height = mask.dims.height;
  std::vector<int> labels(mask.bits.size(), -1);
  DisjointSet sets;

  // First pass: provisional labels from the already-visited neighbors.
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t i = std::size_t(y) * width + x;
      if (!mask.bits[i]) continue;
      int label = -1;
      auto visit = [&](int nx, int ny) {
        if (nx < 0 || nx >= width || ny < 0) return;
        const int other = labels[std::size_t(ny) * width + nx];
        if (other < 0) return;
        if (label < 0)
          label = other;
        else
          sets.unite(label, other);
      };
      visit(x - 1, y);
      visit(x, y - 1);
      if (connectivity == 8) {
        visit(x - 1, y - 1);
        visit(x + 1, y - 1);
      }
      labels[i] = label < 0 ? sets.make() : label;
    }
  }

  // Second pass: resolve roots; components are numbered by first appearance.
  std::vector<int> slot_of_root;
  std::vector<Component> components;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t i = std::size_t(y) * width + x;
      if (labels[i] < 0) continue;
      const int root = sets.find(labels[i]);
      if (std::size_t(root) >= slot_of_root.size()) slot_of_root.resize(std::size_t(root) + 1, -1);
      int& slot = slot_of_root[std::size_t(root)];
      if (slot < 0) {
        slot = int(components.size());
        components.push_back({{x, y, 1, 1}, 0, {}});
      }
      Component& c = components[std::size_t(slot)];
      const int x0 = std::min(c.box.x, x);
      const int y0 = std::min(c.box.y, y);
      const int x1 = std::max(c.box.right(), x + 1);
      const int y1 = std::max(c.box.bottom(), y + 1);
      c.box = {x0, y0, x1 - x0, y1 - y0};
      c.pixels.push_back(int(i));
      ++c.pixel_count;
    }
  }
  return components;
}

std::vector<Detection> extract_detections(const ForegroundMask& mask, const BlobConfig& config,
                                          std::int64_t frame_index) {
  std::vector<Detection> detections;
  for (const Component& c : label_components(mask, config.connectivity)) {
    if (c.pixel_count < config.min_area || c.pixel_count > config.max_area) continue;
    if (border_distance(c.box, mask.dims) < config.border_margin) continue;
    detections.push_back({c.box, c.pixel_count, frame_index});
  }
  std::stable_sort(detections.begin(), detections.end(), [](const Detection& a, const Detection& b) {
    return a.box.y != b.box.y ? a.box.y < b.box.y : a.box.x < b.box.x;
  });
  return detections;
}

}  // namespace edgetrack
