#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "edgetrack/config.hpp"
#include "edgetrack/frame.hpp"
#include "edgetrack/output_sink.hpp"
#include "edgetrack/segmenter.hpp"
#include "edgetrack/track_manager.hpp"

namespace edgetrack {

struct StageTimings {
  std::chrono::nanoseconds segment{0};
  std::chrono::nanoseconds blobs{0};
  std::chrono::nanoseconds track{0};
  std::chrono::nanoseconds manage{0};
  std::chrono::nanoseconds emit{0};

  std::chrono::nanoseconds sum() const { return segment + blobs + track + manage + emit; }
};

struct FrameRecord {
  std::int64_t frame_index = 0;
  bool initialized_model = false;  // first frame only seeds the segmenter
  std::vector<Detection> detections;
  std::vector<LiveTrack> live_tracks;
  std::vector<TrackEvent> events;
  StageTimings timings;
  std::chrono::nanoseconds wall{0};
  std::int64_t foreground_pixels = 0;
  std::optional<std::string> error;
};

struct RunSummary {
  std::int64_t frames_processed = 0;
  std::int64_t frames_dropped = 0;
  std::int64_t frames_failed = 0;
  std::int64_t tracks_created = 0;
  std::int64_t tracks_terminated = 0;
  double elapsed_s = 0.0;
  double mean_fps = 0.0;
  int buffered_high_water = 0;
  std::string kernels;

  std::string to_json() const;
};

// Counts input frames held while waiting to be processed.
class BufferGauge {
 public:
  void acquire() {
    const int now = ++held_;
    int seen = high_.load();
    while (now > seen && !high_.compare_exchange_weak(seen, now)) {}
  }
  void release() { --held_; }
  int held() const { return held_.load(); }
  int high_water() const { return high_.load(); }

 private:
  std::atomic<int> held_{0};
  std::atomic<int> high_{0};
};

struct PipelineHooks {
  // Runs inside the segment stage; tests use it to slow the pipeline down.
  std::function<void(const Frame&)> on_segment;
  // Observes every record after emission.
  std::function<void(const FrameRecord&)> on_record;
};

// Capture -> segment -> extract -> manage -> emit, one frame at a time.
class Pipeline {
 public:
  // sink may be null (no outputs, e.g. when benchmarking).
  Pipeline(PipelineConfig config, std::unique_ptr<OutputSink> sink = nullptr,
           std::shared_ptr<BoxRegressor> regressor = nullptr);

  // One loop iteration. The first frame seeds the segmenter and yields an
  // empty record; emission finishes before this returns.
  FrameRecord process_frame(const Frame& frame);

  // Drains the source under the configured drop policy. Throws
  // Error(SourceFailure) or Error(SinkFailure).
  RunSummary run(FrameSource& source);

  void set_hooks(PipelineHooks hooks) { hooks_ = std::move(hooks); }

  const PipelineConfig& config() const { return config_; }
  const TrackManager& manager() const { return manager_; }
  const Segmenter* segmenter() const { return segmenter_ ? &*segmenter_ : nullptr; }
  const BufferGauge& gauge() const { return gauge_; }

 private:
  RunSummary run_every(FrameSource& source);
  RunSummary run_latest(FrameSource& source);
  void account(const FrameRecord& record, RunSummary& summary) const;

  PipelineConfig config_;
  std::unique_ptr<OutputSink> sink_;
  std::shared_ptr<const TrackerFactory> trackers_;
  TrackManager manager_;
  std::optional<Segmenter> segmenter_;
  BufferGauge gauge_;
  PipelineHooks hooks_;
};

// Opens config.source (paced by live_fps when set), builds the sink from
// config.sink and runs to completion.
RunSummary run_pipeline(const PipelineConfig& config);

}  // namespace edgetrack
