#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "edgetrack/box.hpp"
#include "edgetrack/frame.hpp"

namespace edgetrack {

// One uniform-intensity rectangle. Positions are real-valued and floored
// when drawn; the object is invisible before enter_frame.
struct ObjectPath {
  std::int64_t enter_frame = 1;
  double x0 = 0;
  double y0 = 0;
  double vx = 0;
  double vy = 0;
  int w = 24;
  int h = 24;
  std::uint8_t intensity = 220;
  // Once the object reaches bounce_region it reflects off its walls
  // instead of leaving; empty region means straight-line motion.
  BoundingBox bounce_region{};

  BoundingBox box_at(std::int64_t frame) const;
  bool visible_at(std::int64_t frame) const { return frame >= enter_frame; }
};

struct SyntheticSceneSpec {
  FrameDims dims = kQvga;
  std::int64_t frames = 300;
  std::uint64_t seed = 7;
  std::vector<ObjectPath> objects;
  // Background texture: base + uniform noise in [0, texture_amplitude).
  int background_base = 60;
  int background_amplitude = 40;
};

// n objects in separate horizontal lanes, one entering through the left
// edge every `entry_interval` frames (the first on frame 1) and bouncing
// along its lane afterwards.
SyntheticSceneSpec bench_scene(int n_objects, std::int64_t frames, std::uint64_t seed, int object_size = 32,
                               int entry_interval = 30);

// Frame of the scene at 1-based index `frame`.
Frame render_scene_frame(const SyntheticSceneSpec& spec, std::int64_t frame);
std::vector<Frame> render_scene(const SyntheticSceneSpec& spec);

// Renders scene frames on demand, so long sequences need no disk or RAM.
class SceneSource : public FrameSource {
 public:
  explicit SceneSource(SyntheticSceneSpec spec) : spec_(std::move(spec)) {}
  std::optional<Frame> next() override;
  std::optional<std::int64_t> size_hint() const override { return spec_.frames; }

 private:
  SyntheticSceneSpec spec_;
  std::int64_t next_ = 1;
};

// Writes frame_000001.pgm ... into dir. Throws Error(IoFailure).
void generate_sequence(const SyntheticSceneSpec& spec, const std::filesystem::path& dir);

// Frame by which every bench_scene object is inside its bounce lane.
std::int64_t bench_scene_settled_frame(int n_objects, int object_size = 32, int entry_interval = 30);

}  // namespace edgetrack
