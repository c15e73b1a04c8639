// OpenCV dnn backend for the learned box regressor.
//
// Model files:
//   *.onnx                       two inputs, one 4-value output
//   *.caffemodel + *.prototxt    GOTURN-style Caffe export (inputs data1/data2)
// An optional sidecar "<model>.json" overrides the preprocessing:
//   {"input_size": [w, h], "mean": [r, g, b], "scale": s, "swap_rb": bool,
//    "inputs": ["target", "search"], "output": "name", "output_scale": k}
// Network outputs are divided by output_scale to get search-crop fractions.

#include <fstream>
#include <mutex>

#include <json.hpp>
#include <opencv2/core.hpp>
#include <opencv2/dnn.hpp>

#include "edgetrack/error.hpp"
#include "edgetrack/tracker.hpp"

namespace edgetrack {

namespace {

struct RegressorSpec {
  FrameDims input_size{227, 227};
  cv::Scalar mean{0, 0, 0};
  double scale = 1.0;
  bool swap_rb = false;
  std::string target_input;
  std::string search_input;
  std::string output;
  float output_scale = 1.0f;
};

class OpenCvRegressor : public BoxRegressor {
 public:
  OpenCvRegressor(cv::dnn::Net net, RegressorSpec spec) : net_(std::move(net)), spec_(std::move(spec)) {}

  FrameDims input_size() const override { return spec_.input_size; }

  std::array<float, 4> regress(const RgbCrop& target, const RgbCrop& search) override {
    const cv::Mat target_blob = to_blob(target);
    const cv::Mat search_blob = to_blob(search);
    std::lock_guard lock(mutex_);
    net_.setInput(target_blob, spec_.target_input);
    net_.setInput(search_blob, spec_.search_input);
    const cv::Mat out = spec_.output.empty() ? net_.forward() : net_.forward(spec_.output);
    if (out.total() < 4 || out.depth() != CV_32F)
      throw Error(ErrorCode::ModelLoadFailure, "regressor must output 4 float values");
    const float* v = out.ptr<float>();
    return {v[0] / spec_.output_scale, v[1] / spec_.output_scale, v[2] / spec_.output_scale,
            v[3] / spec_.output_scale};
  }

 private:
  cv::Mat to_blob(const RgbCrop& crop) const {
    const cv::Mat image(crop.dims.height, crop.dims.width, CV_8UC3, const_cast<std::uint8_t*>(crop.rgb.data()));
    return cv::dnn::blobFromImage(image, spec_.scale, cv::Size(), spec_.mean, spec_.swap_rb, false, CV_32F);
  }

  std::mutex mutex_;
  cv::dnn::Net net_;
  RegressorSpec spec_;
};

void apply_sidecar(const std::filesystem::path& path, RegressorSpec& spec) {
  std::ifstream in(path);
  if (!in) return;
  try {
    const auto j = nlohmann::json::parse(in);
    if (j.contains("input_size")) spec.input_size = {j["input_size"][0].get<int>(), j["input_size"][1].get<int>()};
    if (j.contains("mean"))
      spec.mean = cv::Scalar(j["mean"][0].get<double>(), j["mean"][1].get<double>(), j["mean"][2].get<double>());
    if (j.contains("scale")) spec.scale = j["scale"].get<double>();
    if (j.contains("swap_rb")) spec.swap_rb = j["swap_rb"].get<bool>();
    if (j.contains("inputs")) {
      spec.target_input = j["inputs"][0].get<std::string>();
      spec.search_input = j["inputs"][1].get<std::string>();
    }
    if (j.contains("output")) spec.output = j["output"].get<std::string>();
    if (j.contains("output_scale")) spec.output_scale = j["output_scale"].get<float>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ModelLoadFailure, path.string() + ": " + e.what());
  }
  if (!spec.input_size.valid() || spec.output_scale == 0.0f)
    throw Error(ErrorCode::ModelLoadFailure, path.string() + ": invalid preprocessing values");
}

}  // namespace

std::shared_ptr<BoxRegressor> load_opencv_regressor(const std::filesystem::path& model_path) {
  RegressorSpec spec;
  cv::dnn::Net net;
  try {
    if (model_path.extension() == ".caffemodel") {
      std::filesystem::path proto = model_path;
      proto.replace_extension(".prototxt");
      net = cv::dnn::readNetFromCaffe(proto.string(), model_path.string());
      // GOTURN convention: mean 128 on raw pixels, outputs scaled by 10.
      spec.mean = cv::Scalar::all(128);
      spec.target_input = "data1";
      spec.search_input = "data2";
      spec.output_scale = 10.0f;
    } else {
      net = cv::dnn::readNet(model_path.string());
      spec.scale = 1.0 / 255.0;
      spec.target_input = "target";
      spec.search_input = "search";
    }
  } catch (const cv::Exception& e) {
    throw Error(ErrorCode::ModelLoadFailure, model_path.string() + ": " + e.what());
  }
  if (net.empty()) throw Error(ErrorCode::ModelLoadFailure, model_path.string() + ": empty network");
  apply_sidecar(model_path.string() + ".json", spec);
  return std::make_shared<OpenCvRegressor>(std::move(net), std::move(spec));
}

}  // namespace edgetrack
