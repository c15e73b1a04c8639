#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "edgetrack/blobs.hpp"
#include "edgetrack/tracker.hpp"

namespace edgetrack {

struct Track {
  enum class Status { Live, Terminated };

  int id = 0;
  std::unique_ptr<SingleObjectTracker> tracker;
  BoundingBox box;
  std::int64_t born_frame = 0;
  Status status = Status::Live;
};

struct ManagerConfig {
  int edge_stop_margin = 4;
  double new_object_iou_threshold = 0.3;

  void validate() const;
  friend bool operator==(const ManagerConfig&, const ManagerConfig&) = default;
};

struct TrackEvent {
  enum class Kind { Create, Terminate };
  Kind kind;
  int id;
  std::int64_t frame;
  friend bool operator==(const TrackEvent&, const TrackEvent&) = default;
};

struct LiveTrack {
  int id;
  BoundingBox box;
  friend bool operator==(const LiveTrack&, const LiveTrack&) = default;
};

struct ManagerStepResult {
  std::vector<LiveTrack> live_tracks;  // ascending id
  std::vector<TrackEvent> events;
  std::chrono::nanoseconds track_time{0};   // advancing live tracks
  std::chrono::nanoseconds manage_time{0};  // matching, confirmation, init
};

// Current detection whose best IoU against the previous detections is
// smallest; ties prefer more pixels, then the earlier (y, x) corner.
std::optional<Detection> select_candidate(const std::vector<Detection>& current,
                                          const std::vector<Detection>& previous);

// All current detections in the order select_candidate ranks them.
std::vector<Detection> rank_candidates(const std::vector<Detection>& current,
                                       const std::vector<Detection>& previous);

// True iff every live track box overlaps the candidate with IoU < threshold.
bool is_new_object(const Detection& candidate, const std::vector<Track>& tracks, double threshold);

class TrackManager {
 public:
  TrackManager(ManagerConfig config, std::shared_ptr<const TrackerFactory> trackers);

  // Steps every live track on `frame`; tracks whose estimate comes within
  // edge_stop_margin of a border, or whose tracker fails, are terminated.
  std::vector<TrackEvent> advance_tracks(const Frame& frame);

  // One pass of the lifecycle loop for a frame whose detections are known:
  // advance live tracks, pick the candidate detection, confirm it against
  // tracker boxes, start at most one track, then remember the detections.
  ManagerStepResult step(const Frame& frame, const std::vector<Detection>& detections);

  const std::vector<Track>& tracks() const { return tracks_; }
  const std::vector<Detection>& previous_detections() const { return previous_detections_; }
  int next_id() const { return next_id_; }
  std::vector<LiveTrack> live_tracks() const;
  const ManagerConfig& config() const { return config_; }

 private:
  ManagerConfig config_;
  std::shared_ptr<const TrackerFactory> trackers_;
  std::vector<Track> tracks_;
  std::vector<Detection> previous_detections_;
  int next_id_ = 1;
};

}  // namespace edgetrack
