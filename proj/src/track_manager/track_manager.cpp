#include "edgetrack/track_manager.hpp"

#include <algorithm>

#include "edgetrack/error.hpp"

namespace edgetrack {

namespace {

using Clock = std::chrono::steady_clock;

IouRatio best_match(const Detection& d, const std::vector<Detection>& previous) {
  IouRatio best{0, 1};
  for (const Detection& p : previous) best = std::max(best, iou_ratio(d.box, p.box));
  return best;
}

}  // namespace

void ManagerConfig::validate() const {
  if (edge_stop_margin < 0) throw Error(ErrorCode::InvalidConfig, "edge_stop_margin must be >= 0");
  if (!(new_object_iou_threshold >= 0.0 && new_object_iou_threshold <= 1.0))
    throw Error(ErrorCode::InvalidConfig, "new_object_iou_threshold must be in [0, 1]");
}

std::vector<Detection> rank_candidates(const std::vector<Detection>& current,
                                       const std::vector<Detection>& previous) {
  struct Scored {
    IouRatio score;
    const Detection* det;
  };
  std::vector<Scored> scored;
  scored.reserve(current.size());
  for (const Detection& d : current) scored.push_back({best_match(d, previous), &d});
  std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (!(a.score == b.score)) return a.score < b.score;
    if (a.det->pixel_count != b.det->pixel_count) return a.det->pixel_count > b.det->pixel_count;
    if (a.det->box.y != b.det->box.y) return a.det->box.y < b.det->box.y;
    return a.det->box.x < b.det->box.x;
  });
  std::vector<Detection> ranked;
  ranked.reserve(scored.size());
  for (const Scored& s : scored) ranked.push_back(*s.det);
  return ranked;
}

std::optional<Detection> select_candidate(const std::vector<Detection>& current,
                                          const std::vector<Detection>& previous) {
  if (current.empty()) return std::nullopt;
  return rank_candidates(current, previous).front();
}

bool is_new_object(const Detection& candidate, const std::vector<Track>& tracks, double threshold) {
  for (const Track& t : tracks) {
    if (t.status != Track::Status::Live) continue;
    if (iou(candidate.box, t.box) >= threshold) return false;
  }
  return true;
}

TrackManager::TrackManager(ManagerConfig config, std::shared_ptr<const TrackerFactory> trackers)
    : config_(config), trackers_(std::move(trackers)) {
  config_.validate();
  if (!trackers_) throw Error(ErrorCode::InvalidConfig, "track manager needs a tracker factory");
}

std::vector<LiveTrack> TrackManager::live_tracks() const {
  std::vector<LiveTrack> live;
  for (const Track& t : tracks_)
    if (t.status == Track::Status::Live) live.push_back({t.id, t.box});
  return live;
}

std::vector<TrackEvent> TrackManager::advance_tracks(const Frame& frame) {
  std::vector<TrackEvent> events;
  for (Track& t : tracks_) {
    try {
      t.box = t.tracker->step(frame);
      if (border_distance(t.box, frame.dims) < config_.edge_stop_margin) t.status = Track::Status::Terminated;
    } catch (const Error&) {
      t.status = Track::Status::Terminated;
    }
    if (t.status == Track::Status::Terminated) events.push_back({TrackEvent::Kind::Terminate, t.id, frame.index});
  }
  std::erase_if(tracks_, [](const Track& t) { return t.status == Track::Status::Terminated; });
  return events;
}

ManagerStepResult TrackManager::step(const Frame& frame, const std::vector<Detection>& detections) {
  ManagerStepResult result;
  const auto t0 = Clock::now();
  // "Previous objects?" branch: only step when something is being tracked.
  if (!tracks_.empty()) result.events = advance_tracks(frame);
  const auto t1 = Clock::now();

  // Candidates are ranked against the previous detections; the first one
  // that no tracker box already explains becomes the single new track.
  for (const Detection& candidate : rank_candidates(detections, previous_detections_)) {
    if (!is_new_object(candidate, tracks_, config_.new_object_iou_threshold)) continue;
    try {
      Track track;
      track.tracker = trackers_->init(frame, candidate.box);
      track.id = next_id_++;
      track.box = candidate.box;
      track.born_frame = frame.index;
      result.events.push_back({TrackEvent::Kind::Create, track.id, frame.index});
      tracks_.push_back(std::move(track));
      break;
    } catch (const Error&) {
      // a box the tracker cannot hold does not block other candidates
    }
  }

  previous_detections_ = detections;
  result.live_tracks = live_tracks();
  const auto t2 = Clock::now();
  result.track_time = t1 - t0;
  result.manage_time = t2 - t1;
  return result;
}

}  // namespace edgetrack
