#include "edgetrack/output_sink.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

#include "edgetrack/error.hpp"
#include "edgetrack/pnm.hpp"

namespace edgetrack {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json box_json(const BoundingBox& b) { return ordered_json::array({b.x, b.y, b.w, b.h}); }

std::string numbered(const char* prefix, std::int64_t index, const char* ext) {
  char name[64];
  std::snprintf(name, sizeof name, "%s_%06lld.%s", prefix, static_cast<long long>(index), ext);
  return name;
}

}  // namespace

std::array<std::uint8_t, 3> track_color(int id) {
  static constexpr std::array<std::array<std::uint8_t, 3>, 12> kPalette{{
      {230, 25, 75}, {60, 180, 75}, {255, 225, 25}, {0, 130, 200}, {245, 130, 48}, {145, 30, 180},
      {70, 240, 240}, {240, 50, 230}, {210, 245, 60}, {250, 190, 212}, {0, 128, 128}, {170, 110, 40},
  }};
  return kPalette[std::size_t(std::max(id, 0)) % kPalette.size()];
}

std::vector<std::uint8_t> render_tracks(const Frame& frame, const std::vector<LiveTrack>& tracks) {
  std::vector<std::uint8_t> rgb;
  if (frame.color) {
    rgb = *frame.color;
  } else {
    rgb.resize(frame.luma.size() * 3);
    for (std::size_t i = 0; i < frame.luma.size(); ++i) rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = frame.luma[i];
  }
  const int width = frame.dims.width;
  for (const LiveTrack& t : tracks) {
    const auto color = track_color(t.id);
    auto paint = [&](int x, int y) {
      if (x < 0 || y < 0 || x >= width || y >= frame.dims.height) return;
      std::copy(color.begin(), color.end(), rgb.begin() + (std::ptrdiff_t(y) * width + x) * 3);
    };
    const BoundingBox& b = t.box;
    for (int x = b.x; x < b.right(); ++x) {
      paint(x, b.y);
      paint(x, b.bottom() - 1);
    }
    for (int y = b.y; y < b.bottom(); ++y) {
      paint(b.x, y);
      paint(b.right() - 1, y);
    }
  }
  return rgb;
}

std::string frame_log_line(std::int64_t frame_index, const std::vector<LiveTrack>& tracks,
                           const std::vector<Detection>& detections) {
  std::vector<LiveTrack> sorted = tracks;
  std::sort(sorted.begin(), sorted.end(), [](const LiveTrack& a, const LiveTrack& b) { return a.id < b.id; });
  ordered_json line;
  line["frame"] = frame_index;
  line["tracks"] = ordered_json::array();
  for (const LiveTrack& t : sorted) line["tracks"].push_back(ordered_json{{"id", t.id}, {"box", box_json(t.box)}});
  line["detections"] = ordered_json::array();
  for (const Detection& d : detections) line["detections"].push_back(box_json(d.box));
  return line.dump();
}

std::string event_log_line(const TrackEvent& event) {
  ordered_json line;
  line["event"] = event.kind == TrackEvent::Kind::Create ? "create" : "terminate";
  line["id"] = event.id;
  line["frame"] = event.frame;
  return line.dump();
}

OutputSink::OutputSink(SinkConfig config) : config_(std::move(config)) {
  std::error_code ec;
  std::filesystem::create_directories(config_.dir, ec);
  if (config_.write_masks) std::filesystem::create_directories(config_.dir / "masks", ec);
  if (config_.write_frames) std::filesystem::create_directories(config_.dir / "frames", ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + config_.dir.string() + ": " + ec.message());
  if (config_.write_log) {
    log_.open(log_path(config_.dir), std::ios::trunc);
    if (!log_) throw Error(ErrorCode::IoFailure, "cannot write " + log_path(config_.dir).string());
  }
}

std::filesystem::path OutputSink::mask_path(const std::filesystem::path& dir, std::int64_t index) {
  return dir / "masks" / numbered("mask", index, "pgm");
}

std::filesystem::path OutputSink::frame_path(const std::filesystem::path& dir, std::int64_t index) {
  return dir / "frames" / numbered("frame", index, "ppm");
}

std::filesystem::path OutputSink::log_path(const std::filesystem::path& dir) { return dir / "tracks.jsonl"; }

void OutputSink::write_outputs(const Frame& frame, const ForegroundMask& mask, const std::vector<LiveTrack>& tracks,
                               const std::vector<Detection>& detections, const std::vector<TrackEvent>& events) {
  if (!(mask.dims == frame.dims)) throw Error(ErrorCode::DimsMismatch, "mask and frame sizes differ");
  if (config_.write_masks) {
    std::vector<std::uint8_t> plane(mask.bits.size());
    std::transform(mask.bits.begin(), mask.bits.end(), plane.begin(), [](std::uint8_t b) { return b ? 255 : 0; });
    write_pgm(mask_path(config_.dir, frame.index), mask.dims, plane.data());
  }
  if (config_.write_frames) {
    const auto rgb = render_tracks(frame, tracks);
    write_ppm(frame_path(config_.dir, frame.index), frame.dims, rgb.data());
  }
  if (config_.write_log) {
    for (const TrackEvent& e : events) log_ << event_log_line(e) << '\n';
    log_ << frame_log_line(frame.index, tracks, detections) << '\n';
    log_.flush();
    if (!log_) throw Error(ErrorCode::IoFailure, "cannot append to " + log_path(config_.dir).string());
  }
  ++frames_written_;
}

}  // namespace edgetrack
