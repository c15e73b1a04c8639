#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "edgetrack/blobs.hpp"
#include "edgetrack/frame.hpp"
#include "edgetrack/segmenter.hpp"
#include "edgetrack/track_manager.hpp"

namespace edgetrack {

struct SinkConfig {
  std::filesystem::path dir;
  bool write_masks = true;
  bool write_frames = true;
  bool write_log = true;
  friend bool operator==(const SinkConfig&, const SinkConfig&) = default;
};

// Outline color for a track id; consecutive ids get distinct colors.
std::array<std::uint8_t, 3> track_color(int id);

// Interleaved RGB copy of the frame with a 1-pixel outline per track box.
std::vector<std::uint8_t> render_tracks(const Frame& frame, const std::vector<LiveTrack>& tracks);

// JSON Lines records, one object per line.
std::string frame_log_line(std::int64_t frame_index, const std::vector<LiveTrack>& tracks,
                           const std::vector<Detection>& detections);
std::string event_log_line(const TrackEvent& event);

// Writes, per frame: masks/mask_NNNNNN.pgm (foreground 255), frames/frame_NNNNNN.ppm
// with track outlines, and one line in tracks.jsonl (preceded by any
// create/terminate events of that frame). Throws Error(IoFailure).
class OutputSink {
 public:
  explicit OutputSink(SinkConfig config);

  void write_outputs(const Frame& frame, const ForegroundMask& mask, const std::vector<LiveTrack>& tracks,
                     const std::vector<Detection>& detections, const std::vector<TrackEvent>& events);

  const SinkConfig& config() const { return config_; }
  std::int64_t frames_written() const { return frames_written_; }

  static std::filesystem::path mask_path(const std::filesystem::path& dir, std::int64_t index);
  static std::filesystem::path frame_path(const std::filesystem::path& dir, std::int64_t index);
  static std::filesystem::path log_path(const std::filesystem::path& dir);

 private:
  SinkConfig config_;
  std::ofstream log_;
  std::int64_t frames_written_ = 0;
};

}  // namespace edgetrack
