#include "edgetrack/pipeline.hpp"

#include <condition_variable>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "edgetrack/error.hpp"
#include "edgetrack/simd/kernels.hpp"

namespace edgetrack {

namespace {

using Clock = std::chrono::steady_clock;

// Single-slot mailbox between the capture thread and the pipeline: a newer
// frame replaces an unconsumed one, which counts as dropped.
class LatestFrameSlot {
 public:
  explicit LatestFrameSlot(BufferGauge& gauge) : gauge_(gauge) {}

  void put(Frame frame) {
    std::lock_guard lock(mutex_);
    if (frame_) {
      ++dropped_;
    } else {
      gauge_.acquire();
    }
    frame_ = std::move(frame);
    ready_.notify_one();
  }

  void close(std::exception_ptr error = nullptr) {
    std::lock_guard lock(mutex_);
    closed_ = true;
    error_ = error;
    ready_.notify_one();
  }

  // Blocks until a frame is available; nullopt once closed and drained.
  std::optional<Frame> take() {
    std::unique_lock lock(mutex_);
    ready_.wait(lock, [&] { return frame_.has_value() || closed_; });
    if (!frame_) {
      if (error_) std::rethrow_exception(error_);
      return std::nullopt;
    }
    Frame out = std::move(*frame_);
    frame_.reset();
    gauge_.release();
    return out;
  }

  std::int64_t dropped() const {
    std::lock_guard lock(mutex_);
    return dropped_;
  }

 private:
  BufferGauge& gauge_;
  mutable std::mutex mutex_;
  std::condition_variable ready_;
  std::optional<Frame> frame_;
  bool closed_ = false;
  std::exception_ptr error_;
  std::int64_t dropped_ = 0;
};

std::optional<Frame> pull(FrameSource& source) {
  try {
    return source.next();
  } catch (const Error& e) {
    throw Error(ErrorCode::SourceFailure, e.what());
  }
}

std::shared_ptr<const TrackerFactory> make_factory(const TrackerOptions& options,
                                                   std::shared_ptr<BoxRegressor> regressor) {
  if (regressor) return std::make_shared<const TrackerFactory>(options, std::move(regressor));
  return std::make_shared<const TrackerFactory>(options);
}

}  // namespace

std::string RunSummary::to_json() const {
  nlohmann::ordered_json j;
  j["frames_processed"] = frames_processed;
  j["frames_dropped"] = frames_dropped;
  j["frames_failed"] = frames_failed;
  j["tracks_created"] = tracks_created;
  j["tracks_terminated"] = tracks_terminated;
  j["elapsed_s"] = elapsed_s;
  j["mean_fps"] = mean_fps;
  j["buffered_high_water"] = buffered_high_water;
  j["kernels"] = kernels;
  return j.dump();
}

Pipeline::Pipeline(PipelineConfig config, std::unique_ptr<OutputSink> sink, std::shared_ptr<BoxRegressor> regressor)
    : config_((config.validate(), std::move(config))),
      sink_(std::move(sink)),
      trackers_(make_factory(config_.tracker, std::move(regressor))),
      manager_(config_.manager, trackers_) {}

FrameRecord Pipeline::process_frame(const Frame& frame) {
  const auto start = Clock::now();
  FrameRecord record;
  record.frame_index = frame.index;

  ForegroundMask mask(frame.dims);
  try {
    auto t0 = Clock::now();
    if (!segmenter_) {
      segmenter_.emplace(frame, config_.segmenter);
      record.initialized_model = true;
      record.timings.segment = Clock::now() - t0;
    } else {
      mask = segmenter_->step(frame);
      if (hooks_.on_segment) hooks_.on_segment(frame);
      const auto t1 = Clock::now();
      record.timings.segment = t1 - t0;
      record.foreground_pixels = mask.count();

      record.detections = extract_detections(mask, config_.blobs, frame.index);
      record.timings.blobs = Clock::now() - t1;

      ManagerStepResult step = manager_.step(frame, record.detections);
      record.events = std::move(step.events);
      record.timings.track = step.track_time;
      record.timings.manage = step.manage_time;
    }
    record.live_tracks = manager_.live_tracks();
  } catch (const Error& e) {
    // Frame-level failure: nothing was committed for this frame.
    record.error = e.what();
    record.wall = Clock::now() - start;
    return record;
  }

  const auto t_emit = Clock::now();
  if (sink_) {
    try {
      sink_->write_outputs(frame, mask, record.live_tracks, record.detections, record.events);
    } catch (const Error& e) {
      throw Error(ErrorCode::SinkFailure, e.what());
    }
  }
  const auto end = Clock::now();
  record.timings.emit = end - t_emit;
  record.wall = end - start;
  if (hooks_.on_record) hooks_.on_record(record);
  return record;
}

void Pipeline::account(const FrameRecord& record, RunSummary& summary) const {
  ++summary.frames_processed;
  if (record.error) ++summary.frames_failed;
  for (const TrackEvent& e : record.events) {
    if (e.kind == TrackEvent::Kind::Create)
      ++summary.tracks_created;
    else
      ++summary.tracks_terminated;
  }
}

RunSummary Pipeline::run(FrameSource& source) {
  const auto start = Clock::now();
  RunSummary summary = config_.drop_policy == DropPolicy::ProcessEvery ? run_every(source) : run_latest(source);
  summary.elapsed_s = std::chrono::duration<double>(Clock::now() - start).count();
  summary.mean_fps = summary.elapsed_s > 0 ? double(summary.frames_processed) / summary.elapsed_s : 0.0;
  summary.buffered_high_water = gauge_.high_water();
  summary.kernels = std::string(simd::to_string(simd::active_kernels().isa));
  return summary;
}

RunSummary Pipeline::run_every(FrameSource& source) {
  RunSummary summary;
  while (std::optional<Frame> frame = pull(source)) {
    gauge_.acquire();
    const Frame current = std::move(*frame);
    gauge_.release();
    account(process_frame(current), summary);
  }
  return summary;
}

RunSummary Pipeline::run_latest(FrameSource& source) {
  RunSummary summary;
  LatestFrameSlot slot(gauge_);
  std::atomic<bool> stop{false};
  std::thread capture([&] {
    try {
      while (!stop.load()) {
        std::optional<Frame> frame = pull(source);
        if (!frame) break;
        slot.put(std::move(*frame));
      }
      slot.close();
    } catch (...) {
      slot.close(std::current_exception());
    }
  });

  try {
    while (std::optional<Frame> frame = slot.take()) account(process_frame(*frame), summary);
  } catch (...) {
    stop = true;
    capture.join();
    throw;
  }
  capture.join();
  summary.frames_dropped = slot.dropped();
  return summary;
}

RunSummary run_pipeline(const PipelineConfig& config) {
  config.validate();
  std::unique_ptr<FrameSource> source;
  try {
    source = open_source(config.source);
  } catch (const Error& e) {
    throw Error(ErrorCode::SourceFailure, e.what());
  }
  if (config.live_fps > 0) source = std::make_unique<PacedSource>(std::move(source), config.live_fps);

  std::unique_ptr<OutputSink> sink;
  if (!config.sink.dir.empty()) {
    try {
      sink = std::make_unique<OutputSink>(config.sink);
    } catch (const Error& e) {
      throw Error(ErrorCode::SinkFailure, e.what());
    }
  }
  Pipeline pipeline(config, std::move(sink));
  return pipeline.run(*source);
}

}  // namespace edgetrack
