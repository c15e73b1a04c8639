#include "edgetrack/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "edgetrack/error.hpp"
#include "edgetrack/pnm.hpp"
#include "edgetrack/rng.hpp"

namespace edgetrack {

namespace {

constexpr std::uint64_t kBackgroundStream = 0xB6;
constexpr int kSceneMargin = 8;
constexpr int kMinLanes = 6;
constexpr double kEntrySpeed = 4.0;

// Reflects a coordinate that has travelled `u` past `lo` back into [lo, hi].
double reflect(double lo, double hi, double u) {
  const double span = hi - lo;
  if (span <= 0) return lo;
  double m = std::fmod(u, 2 * span);
  if (m < 0) m += 2 * span;
  return lo + (m <= span ? m : 2 * span - m);
}

// Straight motion until the coordinate first reaches [lo, hi], reflection
// off its walls afterwards.
double axis_position(double start, double velocity, double t, double lo, double hi) {
  const double s = start + velocity * t;
  if (velocity == 0) return s;
  if (start < lo) return velocity > 0 && s >= lo ? reflect(lo, hi, s - lo) : s;
  if (start > hi) return velocity < 0 && s <= hi ? reflect(lo, hi, s - lo) : s;
  return reflect(lo, hi, s - lo);
}

}  // namespace

BoundingBox ObjectPath::box_at(std::int64_t frame) const {
  const double t = double(frame - enter_frame);
  double x = x0 + vx * t;
  double y = y0 + vy * t;
  if (!bounce_region.empty()) {
    const double x_lo = bounce_region.x, x_hi = bounce_region.right() - w;
    const double y_lo = bounce_region.y, y_hi = bounce_region.bottom() - h;
    x = axis_position(x0, vx, t, x_lo, x_hi);
    y = axis_position(y0, vy, t, y_lo, y_hi);
  }
  return {int(std::floor(x)), int(std::floor(y)), w, h};
}

SyntheticSceneSpec bench_scene(int n_objects, std::int64_t frames, std::uint64_t seed, int object_size,
                               int entry_interval) {
  SyntheticSceneSpec spec;
  spec.frames = frames;
  spec.seed = seed;
  const int lanes = std::max(kMinLanes, n_objects);
  const int lane_h = (spec.dims.height - 2 * kSceneMargin) / lanes;
  // neighbours stay farther apart than the tracker's context ring
  if (lane_h < object_size + 5) throw Error(ErrorCode::InvalidConfig, "too many objects for the frame height");
  for (int i = 0; i < n_objects; ++i) {
    ObjectPath p;
    p.enter_frame = 1 + std::int64_t(entry_interval) * i;
    p.w = p.h = object_size;
    p.bounce_region = {kSceneMargin, kSceneMargin + i * lane_h, spec.dims.width - 2 * kSceneMargin, lane_h - 4};
    p.x0 = -object_size;
    p.y0 = p.bounce_region.y;
    p.vx = kEntrySpeed + 0.25 * (i % 3);
    p.vy = 0.5;
    p.intensity = std::uint8_t(200 + 10 * (i % 5));
    spec.objects.push_back(p);
  }
  return spec;
}

std::int64_t bench_scene_settled_frame(int n_objects, int object_size, int entry_interval) {
  // last object enters at 1 + (n - 1) * interval and must travel its own
  // size plus the scene margin to be fully inside its lane
  return 1 + std::int64_t(entry_interval) * (n_objects - 1) +
         std::int64_t(std::ceil((object_size + kSceneMargin) / kEntrySpeed)) + 1;
}

Frame render_scene_frame(const SyntheticSceneSpec& spec, std::int64_t frame) {
  Plane plane(spec.dims);
  const int amplitude = std::max(1, spec.background_amplitude);
  for (int y = 0; y < spec.dims.height; ++y) {
    for (int x = 0; x < spec.dims.width; ++x) {
      KeyedRng rng(spec.seed, kBackgroundStream, std::uint64_t(y) * spec.dims.width + x);
      plane.at(x, y) = std::uint8_t(std::clamp(spec.background_base + int(rng.below(std::uint32_t(amplitude))), 0, 255));
    }
  }
  for (const ObjectPath& obj : spec.objects) {
    if (!obj.visible_at(frame)) continue;
    const BoundingBox b = intersect(obj.box_at(frame), {0, 0, spec.dims.width, spec.dims.height});
    for (int y = b.y; y < b.bottom(); ++y)
      std::fill(plane.row(y) + b.x, plane.row(y) + b.right(), obj.intensity);
  }
  return make_frame(std::move(plane), frame);
}

std::vector<Frame> render_scene(const SyntheticSceneSpec& spec) {
  std::vector<Frame> frames;
  frames.reserve(std::size_t(spec.frames));
  for (std::int64_t i = 1; i <= spec.frames; ++i) frames.push_back(render_scene_frame(spec, i));
  return frames;
}

std::optional<Frame> SceneSource::next() {
  if (next_ > spec_.frames) return std::nullopt;
  return render_scene_frame(spec_, next_++);
}

void generate_sequence(const SyntheticSceneSpec& spec, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string() + ": " + ec.message());
  for (std::int64_t i = 1; i <= spec.frames; ++i) {
    const Frame f = render_scene_frame(spec, i);
    char name[32];
    std::snprintf(name, sizeof name, "frame_%06lld.pgm", static_cast<long long>(i));
    write_pgm(dir / name, f.dims, f.luma.data());
  }
}

}  // namespace edgetrack
