#pragma once

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "edgetrack/config.hpp"

namespace edgetrack {

struct BenchRecord {
  int n_objects = 0;
  double fps = 0.0;
  double mean_frame_ms = 0.0;
  double p50_ms = 0.0;
  double p99_ms = 0.0;
  std::int64_t frames = 0;
  std::optional<double> power_mw;
};

struct BenchOptions {
  std::vector<int> n_objects;
  std::int64_t frames = 300;  // measured frames per n
  std::int64_t warmup = 50;   // discarded after all n tracks are live
  std::uint64_t seed = 7;
  // Existing or to-be-generated sequences live in <sequence_dir>/n<k>.
  std::filesystem::path sequence_dir;
  std::filesystem::path power_sensor;
  // Per-frame timing dump (JSON Lines); skipped when empty.
  std::filesystem::path raw_dump;
  PipelineConfig pipeline;
};

// Instantaneous reading from a sensor file holding a milliwatt value;
// nullopt when unconfigured, unreadable or unparsable.
std::optional<double> sample_power(const std::filesystem::path& sensor);

// Samples a sensor file on a background thread, first sample immediately,
// then once per period, until stopped. Inert when the path is empty.
class PowerSampler {
 public:
  explicit PowerSampler(std::filesystem::path sensor, std::chrono::milliseconds period = std::chrono::seconds(1));
  ~PowerSampler();
  PowerSampler(const PowerSampler&) = delete;
  PowerSampler& operator=(const PowerSampler&) = delete;

  void stop();
  // Arithmetic mean of the readings; stops sampling first.
  std::optional<double> mean();
  std::size_t sample_count();

 private:
  void loop();

  std::filesystem::path sensor_;
  std::chrono::milliseconds period_;
  std::mutex mutex_;
  std::condition_variable wake_;
  bool stopping_ = false;
  std::vector<double> samples_;
  std::thread worker_;
};

// Nearest-rank percentile of unsorted samples, q in [0, 100].
double percentile(std::vector<double> samples, double q);

// Frames a generated bench sequence needs for n objects: time for every
// track to start, warm-up, the measured span and some slack.
std::int64_t bench_sequence_length(int n_objects, std::int64_t frames = 300, std::int64_t warmup = 50);

// Replays one sequence per n in process_every mode and records timing
// stats over the frames after warm-up. Throws Error(MeasurementFailure) when
// a sequence does not sustain n live tracks or runs out of frames.
// Measurements are serialized process-wide.
std::vector<BenchRecord> measure(const BenchOptions& options);

inline constexpr const char* kBenchCsvHeader = "n_objects,fps,mean_ms,p50_ms,p99_ms,frames,power_mw";

// '#'-prefixed metadata lines, the header, then one row per record.
std::string bench_csv(const std::vector<BenchRecord>& records, const std::vector<std::string>& metadata = {});

std::vector<std::string> bench_metadata(const BenchOptions& options);

}  // namespace edgetrack
