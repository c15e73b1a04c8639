#include <cmath>

#include "edgetrack/error.hpp"
#include "edgetrack/tracker.hpp"

namespace edgetrack {

namespace {

class RegressionTracker : public SingleObjectTracker {
 public:
  RegressionTracker(const Frame& frame, const BoundingBox& box, const TrackerOptions& options,
                    std::shared_ptr<BoxRegressor> regressor)
      : options_(options), regressor_(std::move(regressor)), box_(box) {
    target_ = crop_patch_rgb(frame, box_, options_.context_factor, regressor_->input_size());
  }

  BoundingBox step(const Frame& frame) override {
    RgbCrop search;
    try {
      search = crop_patch_rgb(frame, box_, options_.context_factor, regressor_->input_size());
    } catch (const Error& e) {
      throw Error(ErrorCode::DegenerateSearchRegion, e.what());
    }
    const std::array<float, 4> out = regressor_->regress(target_, search);
    const BoundingBox& r = search.region;
    const long x0 = std::lround(r.x + double(out[0]) * r.w);
    const long y0 = std::lround(r.y + double(out[1]) * r.h);
    const long x1 = std::lround(r.x + double(out[2]) * r.w);
    const long y1 = std::lround(r.y + double(out[3]) * r.h);
    const BoundingBox raw{int(x0), int(y0), int(std::max(1L, x1 - x0)), int(std::max(1L, y1 - y0))};
    try {
      box_ = clamp_to_frame(raw, frame.dims);
    } catch (const Error& e) {
      throw Error(ErrorCode::DegenerateSearchRegion, e.what());
    }
    target_ = crop_patch_rgb(frame, box_, options_.context_factor, regressor_->input_size());
    return box_;
  }

  BoundingBox last_box() const override { return box_; }

 private:
  TrackerOptions options_;
  std::shared_ptr<BoxRegressor> regressor_;
  BoundingBox box_;
  RgbCrop target_;
};

}  // namespace

TrackerKind TrackerKind::parse(const std::string& text) {
  if (text == "fallback") return fallback();
  if (text.rfind("model:", 0) == 0 && text.size() > 6) return learned(text.substr(6));
  throw Error(ErrorCode::InvalidConfig, "tracker must be 'fallback' or 'model:<path>', got '" + text + "'");
}

std::string TrackerKind::to_string() const {
  return type == Type::CorrelationFallback ? "fallback" : "model:" + model_path.string();
}

TrackerFactory::TrackerFactory(TrackerOptions options) : options_(std::move(options)) {
  if (options_.kind.type == TrackerKind::Type::LearnedRegressor)
    regressor_ = load_regressor(options_.kind.model_path);
}

TrackerFactory::TrackerFactory(TrackerOptions options, std::shared_ptr<BoxRegressor> regressor)
    : options_(std::move(options)), regressor_(std::move(regressor)) {
  if (options_.kind.type == TrackerKind::Type::LearnedRegressor && !regressor_)
    throw Error(ErrorCode::ModelLoadFailure, "learned tracker without a model");
}

std::unique_ptr<SingleObjectTracker> TrackerFactory::init(const Frame& frame, const BoundingBox& box) const {
  if (box.w < options_.min_box_side || box.h < options_.min_box_side)
    throw Error(ErrorCode::BoxTooSmall, "tracker box needs sides >= " + std::to_string(options_.min_box_side));
  if (!inside_frame(box, frame.dims)) throw Error(ErrorCode::OutOfFrame, "tracker box leaves the frame");
  if (regressor_) return std::make_unique<RegressionTracker>(frame, box, options_, regressor_);
  return std::make_unique<CorrelationTracker>(frame, box, options_);
}

std::unique_ptr<SingleObjectTracker> tracker_init(const Frame& frame, const BoundingBox& box,
                                                  const TrackerKind& kind) {
  TrackerOptions options;
  options.kind = kind;
  return TrackerFactory(options).init(frame, box);
}

}  // namespace edgetrack
