#include <algorithm>
#include <map>
#include <regex>

#include "edgetrack/error.hpp"
#include "edgetrack/frame.hpp"
#include "edgetrack/pnm.hpp"

namespace edgetrack {

namespace {

struct SequenceEntry {
  std::int64_t index;
  std::filesystem::path path;
};

// Converts a printf-style "prefix%06d.ext" pattern into a matching regex.
std::regex pattern_regex(const std::string& pattern) {
  static const std::regex printf_spec(R"(%0?(\d*)d)");
  std::smatch m;
  if (!std::regex_search(pattern, m, printf_spec))
    throw Error(ErrorCode::InvalidConfig, "sequence pattern needs a %d field: " + pattern);
  auto escape = [](const std::string& s) {
    static const std::regex special(R"([.^$|()\[\]{}*+?\\])");
    return std::regex_replace(s, special, R"(\$&)");
  };
  const std::string digits = m[1].length() ? "\\d{" + m[1].str() + "}" : "\\d+";
  return std::regex("^" + escape(m.prefix()) + "(" + digits + ")" + escape(m.suffix()) + "$");
}

class ImageSequenceSource : public FrameSource {
 public:
  explicit ImageSequenceSource(std::vector<SequenceEntry> entries)
      : entries_(std::move(entries)), start_(std::chrono::steady_clock::now()) {}

  std::optional<Frame> next() override {
    if (pos_ >= entries_.size()) return std::nullopt;
    const SequenceEntry& entry = entries_[pos_++];
    PnmImage img = read_pnm(entry.path);
    if (dims_ && !(img.dims == *dims_))
      throw Error(ErrorCode::MalformedImage, entry.path.string() + ": frame size differs from sequence");
    dims_ = img.dims;

    Frame f;
    f.dims = img.dims;
    f.index = entry.index;
    f.timestamp = std::chrono::steady_clock::now() - start_;
    if (img.channels == 1) {
      f.luma = std::move(img.pixels);
    } else {
      f.luma.resize(std::size_t(img.dims.pixels()));
      for (std::size_t i = 0; i < f.luma.size(); ++i)
        f.luma[i] = rgb_to_luma(img.pixels[3 * i], img.pixels[3 * i + 1], img.pixels[3 * i + 2]);
      f.color = std::move(img.pixels);
    }
    return f;
  }

  std::optional<std::int64_t> size_hint() const override { return std::int64_t(entries_.size()); }

 private:
  std::vector<SequenceEntry> entries_;
  std::size_t pos_ = 0;
  std::optional<FrameDims> dims_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

std::unique_ptr<FrameSource> open_image_sequence(const std::filesystem::path& dir,
                                                 const std::string& pattern) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec))
    throw Error(ErrorCode::IoFailure, "not a readable directory: " + dir.string());

  // Without an explicit pattern, accept <prefix><digits>.pgm|.ppm and keep the
  // most populous prefix so stray files do not interleave with the sequence.
  const std::regex re = pattern.empty() ? std::regex(R"(^(.*?)(\d+)\.(pgm|ppm)$)")
                                        : pattern_regex(pattern);
  std::map<std::string, std::vector<SequenceEntry>> groups;
  for (const auto& item : std::filesystem::directory_iterator(dir, ec)) {
    if (!item.is_regular_file()) continue;
    const std::string name = item.path().filename().string();
    std::smatch m;
    if (!std::regex_match(name, m, re)) continue;
    if (pattern.empty())
      groups[m[1].str() + "." + m[3].str()].push_back({std::stoll(m[2].str()), item.path()});
    else
      groups[""].push_back({std::stoll(m[1].str()), item.path()});
  }
  if (ec) throw Error(ErrorCode::IoFailure, "cannot list " + dir.string() + ": " + ec.message());
  if (groups.empty()) throw Error(ErrorCode::NoFramesFound, "no PGM/PPM frames in " + dir.string());

  auto best = std::max_element(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
    return a.second.size() < b.second.size();
  });
  std::vector<SequenceEntry> entries = std::move(best->second);
  std::sort(entries.begin(), entries.end(),
            [](const SequenceEntry& a, const SequenceEntry& b) { return a.index < b.index; });
  return std::make_unique<ImageSequenceSource>(std::move(entries));
}

std::unique_ptr<FrameSource> open_source(const std::filesystem::path& path) {
  if (path.extension() == ".y4m") return open_y4m(path);
  return open_image_sequence(path);
}

}  // namespace edgetrack
