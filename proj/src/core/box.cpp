#include "edgetrack/box.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "edgetrack/error.hpp"

namespace edgetrack {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfFrame: return "OutOfFrame";
    case ErrorCode::NoFramesFound: return "NoFramesFound";
    case ErrorCode::MalformedImage: return "MalformedImage";
    case ErrorCode::UnsupportedChroma: return "UnsupportedChroma";
    case ErrorCode::TruncatedStream: return "TruncatedStream";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::DimsMismatch: return "DimsMismatch";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::BoxTooSmall: return "BoxTooSmall";
    case ErrorCode::ModelLoadFailure: return "ModelLoadFailure";
    case ErrorCode::DegenerateSearchRegion: return "DegenerateSearchRegion";
    case ErrorCode::SourceFailure: return "SourceFailure";
    case ErrorCode::SinkFailure: return "SinkFailure";
    case ErrorCode::UnknownFlag: return "UnknownFlag";
    case ErrorCode::MissingSubcommand: return "MissingSubcommand";
    case ErrorCode::ConflictingFlags: return "ConflictingFlags";
    case ErrorCode::MeasurementFailure: return "MeasurementFailure";
  }
  return "Unknown";
}

std::ostream& operator<<(std::ostream& os, const BoundingBox& b) {
  return os << '[' << b.x << ", " << b.y << ", " << b.w << ", " << b.h << ']';
}

std::int64_t area(const BoundingBox& b) {
  return std::int64_t(b.w) * b.h;
}

BoundingBox intersect(const BoundingBox& a, const BoundingBox& b) {
  const int x0 = std::max(a.x, b.x);
  const int y0 = std::max(a.y, b.y);
  const int x1 = std::min(a.right(), b.right());
  const int y1 = std::min(a.bottom(), b.bottom());
  if (x1 <= x0 || y1 <= y0) return {x0, y0, 0, 0};
  return {x0, y0, x1 - x0, y1 - y0};
}

IouRatio iou_ratio(const BoundingBox& a, const BoundingBox& b) {
  const std::int64_t inter = area(intersect(a, b));
  const std::int64_t uni = area(a) + area(b) - inter;
  if (uni <= 0) return {0, 1};
  return {inter, uni};
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  return iou_ratio(a, b).value();
}

int border_distance(const BoundingBox& b, const FrameDims& dims) {
  return std::min({b.x, b.y, dims.width - b.right(), dims.height - b.bottom()});
}

BoundingBox clamp_to_frame(const BoundingBox& b, const FrameDims& dims) {
  const BoundingBox clipped = intersect(b, {0, 0, dims.width, dims.height});
  if (clipped.empty()) {
    std::ostringstream msg;
    msg << "box " << b << " lies outside " << dims.width << 'x' << dims.height;
    throw Error(ErrorCode::OutOfFrame, msg.str());
  }
  return clipped;
}

bool inside_frame(const BoundingBox& b, const FrameDims& dims) {
  return !b.empty() && b.x >= 0 && b.y >= 0 && b.right() <= dims.width &&
         b.bottom() <= dims.height;
}

BoundingBox scale_about_center(const BoundingBox& b, double factor) {
  const int w = std::max(1, int(std::lround(b.w * factor)));
  const int h = std::max(1, int(std::lround(b.h * factor)));
  // floor division keeps the result translation-equivariant for negative offsets
  auto floor_half = [](int v) { return v >= 0 ? v / 2 : -((-v + 1) / 2); };
  return {b.x + floor_half(b.w - w), b.y + floor_half(b.h - h), w, h};
}

}  // namespace edgetrack
