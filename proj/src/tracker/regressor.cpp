#include <fstream>

#include "edgetrack/error.hpp"
#include "edgetrack/tracker.hpp"

namespace edgetrack {

#if EDGETRACK_HAVE_OPENCV_DNN
std::shared_ptr<BoxRegressor> load_opencv_regressor(const std::filesystem::path& model_path);
#endif

std::shared_ptr<BoxRegressor> load_regressor(const std::filesystem::path& model_path) {
  std::ifstream probe(model_path, std::ios::binary);
  if (model_path.empty() || !probe)
    throw Error(ErrorCode::ModelLoadFailure, "cannot read model file '" + model_path.string() + "'");
#if EDGETRACK_HAVE_OPENCV_DNN
  return load_opencv_regressor(model_path);
#else
  throw Error(ErrorCode::ModelLoadFailure, "built without an inference backend; use the fallback tracker");
#endif
}

}  // namespace edgetrack
