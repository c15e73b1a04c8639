#include "edgetrack/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "edgetrack/error.hpp"
#include "edgetrack/pipeline.hpp"
#include "edgetrack/scene.hpp"
#include "edgetrack/simd/kernels.hpp"

namespace edgetrack {

namespace {

// Frames appended after the measured span so late track creation or a
// slow warm-up never runs the sequence dry.
constexpr std::int64_t kSlackFrames = 100;

std::mutex& measurement_mutex() {
  static std::mutex m;
  return m;
}

std::unique_ptr<FrameSource> bench_source(const BenchOptions& options, const SyntheticSceneSpec& spec, int n) {
  if (options.sequence_dir.empty()) return std::make_unique<SceneSource>(spec);
  const std::filesystem::path dir = options.sequence_dir / ("n" + std::to_string(n));
  if (!std::filesystem::exists(dir)) generate_sequence(spec, dir);
  return open_image_sequence(dir);
}

BenchRecord measure_one(const BenchOptions& options, int n, std::ostream* raw) {
  const std::int64_t length = bench_sequence_length(n, options.frames, options.warmup);
  const SyntheticSceneSpec spec = bench_scene(n, length, options.seed);
  std::unique_ptr<FrameSource> source = bench_source(options, spec, n);

  PipelineConfig config = options.pipeline;
  config.drop_policy = DropPolicy::ProcessEvery;
  config.live_fps = 0.0;
  config.sink = {};
  Pipeline pipeline(config);

  std::optional<std::int64_t> tracked_from;
  std::vector<double> samples;
  samples.reserve(std::size_t(options.frames));
  std::optional<PowerSampler> power;

  while (std::int64_t(samples.size()) < options.frames) {
    std::optional<Frame> frame = source->next();
    if (!frame)
      throw Error(ErrorCode::MeasurementFailure, "sequence for n=" + std::to_string(n) + " ended before " +
                                                std::to_string(options.frames) + " measured frames");
    const FrameRecord record = pipeline.process_frame(*frame);
    if (record.error) throw Error(ErrorCode::MeasurementFailure, "frame " + std::to_string(record.frame_index) + ": " + *record.error);

    const int live = int(record.live_tracks.size());
    if (!tracked_from && live == n) tracked_from = record.frame_index;
    const bool measured = tracked_from && record.frame_index >= *tracked_from + options.warmup;
    if (measured && live != n)
      throw Error(ErrorCode::MeasurementFailure, "n=" + std::to_string(n) + " tracks not sustained at frame " +
                                                std::to_string(record.frame_index));
    const double ms = std::chrono::duration<double, std::milli>(record.wall).count();
    if (measured) {
      if (!power) power.emplace(options.power_sensor);
      samples.push_back(ms);
    }
    if (raw) {
      nlohmann::ordered_json j;
      j["n_objects"] = n;
      j["frame"] = record.frame_index;
      j["ms"] = ms;
      j["live_tracks"] = live;
      j["measured"] = measured;
      *raw << j.dump() << '\n';
    }
  }

  BenchRecord out;
  out.n_objects = n;
  out.frames = std::int64_t(samples.size());
  out.mean_frame_ms = std::accumulate(samples.begin(), samples.end(), 0.0) / double(samples.size());
  out.fps = out.mean_frame_ms > 0 ? 1000.0 / out.mean_frame_ms : 0.0;
  out.p50_ms = percentile(samples, 50);
  out.p99_ms = percentile(samples, 99);
  if (power) out.power_mw = power->mean();
  return out;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::int64_t bench_sequence_length(int n_objects, std::int64_t frames, std::int64_t warmup) {
  return bench_scene_settled_frame(n_objects) + warmup + frames + kSlackFrames;
}

double percentile(std::vector<double> samples, double q) {
  if (samples.empty()) return 0.0;
  std::sort(samples.begin(), samples.end());
  const double rank = std::ceil(std::clamp(q, 0.0, 100.0) / 100.0 * double(samples.size()));
  const std::size_t idx = std::size_t(std::max(rank, 1.0)) - 1;
  return samples[std::min(idx, samples.size() - 1)];
}

PowerSampler::PowerSampler(std::filesystem::path sensor, std::chrono::milliseconds period)
    : sensor_(std::move(sensor)), period_(period) {
  if (sensor_.empty()) return;
  worker_ = std::thread([this] { loop(); });
}

PowerSampler::~PowerSampler() { stop(); }

void PowerSampler::stop() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  wake_.notify_all();
  if (worker_.joinable()) worker_.join();
}

std::optional<double> PowerSampler::mean() {
  stop();
  if (samples_.empty()) return std::nullopt;
  return std::accumulate(samples_.begin(), samples_.end(), 0.0) / double(samples_.size());
}

std::size_t PowerSampler::sample_count() {
  stop();
  return samples_.size();
}

void PowerSampler::loop() {
  std::unique_lock lock(mutex_);
  while (!stopping_) {
    if (std::optional<double> mw = sample_power(sensor_)) samples_.push_back(*mw);
    wake_.wait_for(lock, period_, [&] { return stopping_; });
  }
}

std::vector<BenchRecord> measure(const BenchOptions& options) {
  for (int n : options.n_objects)
    if (n < 1) throw Error(ErrorCode::InvalidConfig, "bench object counts must be >= 1");
  if (options.frames < 1 || options.warmup < 0)
    throw Error(ErrorCode::InvalidConfig, "bench needs frames >= 1 and warmup >= 0");
  options.pipeline.validate();

  std::lock_guard lock(measurement_mutex());
  std::ofstream raw;
  if (!options.raw_dump.empty()) {
    raw.open(options.raw_dump);
    if (!raw) throw Error(ErrorCode::IoFailure, "cannot write " + options.raw_dump.string());
  }
  std::vector<BenchRecord> records;
  for (int n : options.n_objects) records.push_back(measure_one(options, n, raw.is_open() ? &raw : nullptr));
  return records;
}

std::vector<std::string> bench_metadata(const BenchOptions& options) {
  std::ostringstream scene;
  scene << "scene: synthetic QVGA, 32x32 uniform squares over seeded noise texture, one lane per object, "
           "entering every 30 frames from frame 1 through the left edge then bouncing along the lane; seed "
        << options.seed;
  return {
      scene.str(),
      "protocol: process_every, timing starts once all n tracks are live, " + std::to_string(options.warmup) +
          " warm-up frames discarded, " + std::to_string(options.frames) + " measured frames per n",
      "tracker: " + options.pipeline.tracker.kind.to_string(),
      "kernels: " + std::string(simd::to_string(simd::active_kernels().isa)),
  };
}

std::string bench_csv(const std::vector<BenchRecord>& records, const std::vector<std::string>& metadata) {
  std::ostringstream out;
  for (const std::string& line : metadata) out << "# " << line << '\n';
  out << kBenchCsvHeader << '\n';
  for (const BenchRecord& r : records) {
    out << r.n_objects << ',' << format_number(r.fps) << ',' << format_number(r.mean_frame_ms) << ','
        << format_number(r.p50_ms) << ',' << format_number(r.p99_ms) << ',' << r.frames << ','
        << (r.power_mw ? format_number(*r.power_mw) : "") << '\n';
  }
  return out.str();
}

}  // namespace edgetrack
