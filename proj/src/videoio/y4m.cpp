#include <algorithm>
#include <fstream>
#include <sstream>

#include "edgetrack/error.hpp"
#include "edgetrack/frame.hpp"

namespace edgetrack {

namespace {

std::uint8_t clip8(int v) { return std::uint8_t(std::clamp(v, 0, 255)); }

double header_number(const std::filesystem::path& path, const std::string& text) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw Error(ErrorCode::MalformedImage, path.string() + ": bad header value '" + text + "'");
  return v;
}

class Y4mSource : public FrameSource {
 public:
  explicit Y4mSource(const std::filesystem::path& path)
      : path_(path), in_(path, std::ios::binary), start_(std::chrono::steady_clock::now()) {
    if (!in_) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    std::string header;
    if (!std::getline(in_, header) || header.rfind("YUV4MPEG2", 0) != 0)
      throw Error(ErrorCode::MalformedImage, path.string() + ": missing YUV4MPEG2 header");

    std::istringstream fields(header.substr(9));
    std::string chroma = "420jpeg";
    std::string field;
    while (fields >> field) {
      const char tag = field[0];
      const std::string value = field.substr(1);
      if (tag == 'W') {
        dims_.width = int(header_number(path, value));
      } else if (tag == 'H') {
        dims_.height = int(header_number(path, value));
      } else if (tag == 'F') {
        const auto colon = value.find(':');
        const double num = header_number(path, value.substr(0, colon));
        const double den = colon == std::string::npos ? 1.0 : header_number(path, value.substr(colon + 1));
        if (num > 0 && den > 0) fps_ = num / den;
      } else if (tag == 'C') {
        chroma = value;
      }
    }
    if (!dims_.valid()) throw Error(ErrorCode::MalformedImage, path.string() + ": bad W/H");

    if (chroma == "mono") {
      chroma_bytes_ = 0;
    } else if (chroma == "420" || chroma == "420jpeg" || chroma == "420paldv" || chroma == "420mpeg2") {
      chroma_w_ = (dims_.width + 1) / 2;
      chroma_h_ = (dims_.height + 1) / 2;
      chroma_bytes_ = std::size_t(chroma_w_) * chroma_h_;
    } else {
      throw Error(ErrorCode::UnsupportedChroma, path.string() + ": C" + chroma);
    }
  }

  std::optional<Frame> next() override {
    if (done_) return std::nullopt;
    std::string marker;
    if (!std::getline(in_, marker)) {
      done_ = true;
      return std::nullopt;
    }
    if (marker.rfind("FRAME", 0) != 0) {
      done_ = true;
      throw Error(ErrorCode::MalformedImage, path_.string() + ": expected FRAME marker");
    }

    Frame f;
    f.dims = dims_;
    f.index = ++count_;
    f.timestamp = std::chrono::steady_clock::now() - start_;
    f.luma.resize(std::size_t(dims_.pixels()));
    read_exact(f.luma.data(), f.luma.size());
    if (chroma_bytes_ > 0) {
      std::vector<std::uint8_t> u(chroma_bytes_), v(chroma_bytes_);
      read_exact(u.data(), u.size());
      read_exact(v.data(), v.size());
      f.color = to_rgb(f.luma, u, v);
    }
    return f;
  }

  std::optional<double> nominal_fps() const override { return fps_; }

 private:
  void read_exact(std::uint8_t* dst, std::size_t n) {
    in_.read(reinterpret_cast<char*>(dst), std::streamsize(n));
    if (std::size_t(in_.gcount()) != n) {
      done_ = true;
      throw Error(ErrorCode::TruncatedStream, path_.string() + ": stream ends mid-frame");
    }
  }

  // Integer BT.601 limited-range YCbCr -> RGB.
  std::vector<std::uint8_t> to_rgb(const std::vector<std::uint8_t>& y, const std::vector<std::uint8_t>& u,
                                   const std::vector<std::uint8_t>& v) const {
    std::vector<std::uint8_t> rgb(y.size() * 3);
    for (int row = 0; row < dims_.height; ++row) {
      for (int col = 0; col < dims_.width; ++col) {
        const std::size_t i = std::size_t(row) * dims_.width + col;
        const std::size_t ci = std::size_t(row / 2) * chroma_w_ + col / 2;
        const int c = 298 * (int(y[i]) - 16);
        const int d = int(u[ci]) - 128;
        const int e = int(v[ci]) - 128;
        rgb[3 * i] = clip8((c + 409 * e + 128) >> 8);
        rgb[3 * i + 1] = clip8((c - 100 * d - 208 * e + 128) >> 8);
        rgb[3 * i + 2] = clip8((c + 516 * d + 128) >> 8);
      }
    }
    return rgb;
  }

  std::filesystem::path path_;
  std::ifstream in_;
  FrameDims dims_{0, 0};
  std::optional<double> fps_;
  int chroma_w_ = 0;
  int chroma_h_ = 0;
  std::size_t chroma_bytes_ = 0;
  std::int64_t count_ = 0;
  bool done_ = false;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

std::unique_ptr<FrameSource> open_y4m(const std::filesystem::path& path) {
  return std::make_unique<Y4mSource>(path);
}

}  // namespace edgetrack
