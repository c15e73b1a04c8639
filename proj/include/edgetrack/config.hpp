#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "edgetrack/blobs.hpp"
#include "edgetrack/output_sink.hpp"
#include "edgetrack/segmenter.hpp"
#include "edgetrack/track_manager.hpp"
#include "edgetrack/tracker.hpp"

namespace edgetrack {

enum class DropPolicy { ProcessEvery, DropToLatest };

struct PipelineConfig {
  SegmenterConfig segmenter;
  BlobConfig blobs;
  ManagerConfig manager;
  TrackerOptions tracker;
  std::string source;
  SinkConfig sink;
  DropPolicy drop_policy = DropPolicy::ProcessEvery;
  // Paces file replay like a live camera when > 0.
  double live_fps = 0.0;

  void validate() const;
};

// Flat "key = value" text, one entry per line; '#' starts a comment.
// Throws Error(InvalidConfig) on malformed lines.
std::map<std::string, std::string> parse_key_values(const std::string& text);

// Applies entries on top of `config`; unknown keys and unparsable values
// throw Error(InvalidConfig).
void apply_key_values(const std::map<std::string, std::string>& entries, PipelineConfig& config);
void apply_key_value(const std::string& key, const std::string& value, PipelineConfig& config);

PipelineConfig load_config_file(const std::filesystem::path& path, PipelineConfig base = {});

// Effective configuration in the same flat format; feeding it back through
// parse_key_values/apply_key_values reproduces the configuration.
std::string dump_config(const PipelineConfig& config);

}  // namespace edgetrack
