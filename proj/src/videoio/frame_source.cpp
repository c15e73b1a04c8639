#include <thread>

#include "edgetrack/error.hpp"
#include "edgetrack/frame.hpp"

namespace edgetrack {

std::optional<Frame> VectorSource::next() {
  if (pos_ >= frames_.size()) return std::nullopt;
  return frames_[pos_++];
}

PacedSource::PacedSource(std::unique_ptr<FrameSource> inner, double fps)
    : inner_(std::move(inner)), fps_(fps) {
  if (!(fps > 0)) throw Error(ErrorCode::InvalidConfig, "paced source needs fps > 0");
}

std::optional<Frame> PacedSource::next() {
  const auto now = std::chrono::steady_clock::now();
  if (!start_) start_ = now;
  const auto due = *start_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                 std::chrono::duration<double>(double(emitted_) / fps_));
  if (due > now) std::this_thread::sleep_until(due);
  auto frame = inner_->next();
  if (frame) {
    frame->timestamp = std::chrono::steady_clock::now() - *start_;
    ++emitted_;
  }
  return frame;
}

}  // namespace edgetrack
