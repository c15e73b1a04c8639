#include <cmath>
#include <limits>

#include "edgetrack/error.hpp"
#include "edgetrack/simd/kernels.hpp"
#include "edgetrack/tracker.hpp"

namespace edgetrack {

double ncc_from_moments(std::uint64_t n, std::uint64_t sum_t, std::uint64_t sum_tt, std::uint64_t sum_p,
                        std::uint64_t sum_pp, std::uint64_t sum_tp) {
  const auto nn = std::int64_t(n);
  const std::int64_t st = std::int64_t(sum_t);
  const std::int64_t sp = std::int64_t(sum_p);
  const std::int64_t var_t = nn * std::int64_t(sum_tt) - st * st;
  const std::int64_t var_p = nn * std::int64_t(sum_pp) - sp * sp;
  if (var_t <= 0 || var_p <= 0) return 0.0;
  const std::int64_t cov = nn * std::int64_t(sum_tp) - st * sp;
  return double(cov) / std::sqrt(double(var_t) * double(var_p));
}

CorrelationTracker::CorrelationTracker(const Frame& frame, const BoundingBox& box, const TrackerOptions& options)
    : options_(options), box_(box) {
  if (box.w < options_.min_box_side || box.h < options_.min_box_side)
    throw Error(ErrorCode::BoxTooSmall, "tracker box needs sides >= " + std::to_string(options_.min_box_side));
  if (!inside_frame(box, frame.dims)) throw Error(ErrorCode::OutOfFrame, "tracker box leaves the frame");
  if (!(options_.context_factor >= 1.0))
    throw Error(ErrorCode::InvalidConfig, "context_factor must be >= 1");
  capture(frame);
}

void CorrelationTracker::capture(const Frame& frame) {
  const int pad = options_.template_pad;
  template_rect_ = clamp_to_frame({box_.x - pad, box_.y - pad, box_.w + 2 * pad, box_.h + 2 * pad}, frame.dims);
  template_ = Plane({template_rect_.w, template_rect_.h});
  for (int y = 0; y < template_rect_.h; ++y) {
    const std::uint8_t* src = frame.luma.data() + std::size_t(template_rect_.y + y) * frame.dims.width + template_rect_.x;
    std::copy(src, src + template_rect_.w, template_.row(y));
  }
}

CorrelationTracker::SearchWindow CorrelationTracker::search_window(FrameDims dims) const {
  const BoundingBox region = intersect(scale_about_center(box_, options_.context_factor), {0, 0, dims.width, dims.height});
  SearchWindow win{region, region.x - box_.x, region.right() - box_.right(), region.y - box_.y,
                   region.bottom() - box_.bottom()};
  if (region.empty() || win.dx_min > win.dx_max || win.dy_min > win.dy_max)
    throw Error(ErrorCode::DegenerateSearchRegion, "search region cannot hold the target box");
  return win;
}

double CorrelationTracker::score_at(const Frame& frame, int dx, int dy) const {
  const BoundingBox shifted{template_rect_.x + dx, template_rect_.y + dy, template_rect_.w, template_rect_.h};
  const BoundingBox overlap = intersect(shifted, {0, 0, frame.dims.width, frame.dims.height});
  if (overlap.empty()) return 0.0;
  const int tx = overlap.x - shifted.x;
  const int ty = overlap.y - shifted.y;
  const simd::WindowMoments m = simd::active_kernels().window_moments(
      {template_.row(ty) + tx, std::size_t(template_.dims.width),
       frame.luma.data() + std::size_t(overlap.y) * frame.dims.width + overlap.x, std::size_t(frame.dims.width),
       overlap.w, overlap.h});
  return ncc_from_moments(std::uint64_t(area(overlap)), m.sum_t, m.sum_tt, m.sum_p, m.sum_pp, m.sum_tp);
}

BoundingBox CorrelationTracker::step(const Frame& frame) {
  const SearchWindow win = search_window(frame.dims);

  // Scan order with a strict improvement test: ties keep the smaller
  // displacement, then the earlier scan position.
  double best = -std::numeric_limits<double>::infinity();
  int best_dx = 0, best_dy = 0;
  long best_mag = std::numeric_limits<long>::max();
  for (int dy = win.dy_min; dy <= win.dy_max; ++dy) {
    for (int dx = win.dx_min; dx <= win.dx_max; ++dx) {
      const double s = score_at(frame, dx, dy);
      const long mag = long(dx) * dx + long(dy) * dy;
      if (s > best || (s == best && mag < best_mag)) {
        best = s;
        best_dx = dx;
        best_dy = dy;
        best_mag = mag;
      }
    }
  }
  box_ = {box_.x + best_dx, box_.y + best_dy, box_.w, box_.h};
  last_score_ = best;
  capture(frame);
  return box_;
}

}  // namespace edgetrack
