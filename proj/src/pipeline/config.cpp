#include "edgetrack/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "edgetrack/error.hpp"

namespace edgetrack {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw Error(ErrorCode::InvalidConfig, "bad value for " + key + ": '" + value + "'");
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) bad_value(key, value);
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value);
}

// Shortest text that parses back to the same value.
template <typename T>
std::string format_number(T v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

// One table drives parsing and dumping so the two never drift apart.
struct Field {
  const char* key;
  std::function<void(PipelineConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

template <typename T, typename Member>
Field numeric(const char* key, Member member) {
  return {key,
          [member](PipelineConfig& c, const std::string& k, const std::string& v) {
            member(c) = parse_number<T>(k, v);
          },
          [member](const PipelineConfig& c) { return format_number<T>(member(c)); }};
}

template <typename Member>
Field boolean(const char* key, Member member) {
  return {key,
          [member](PipelineConfig& c, const std::string& k, const std::string& v) { member(c) = parse_bool(k, v); },
          [member](const PipelineConfig& c) {
            return std::string(member(c) ? "true" : "false");
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(numeric<int>("segmenter.n_samples", [](auto& c) -> auto& { return c.segmenter.n_samples; }));
    f.push_back(numeric<int>("segmenter.min_matches", [](auto& c) -> auto& { return c.segmenter.min_matches; }));
    f.push_back(numeric<float>("segmenter.r_init", [](auto& c) -> auto& { return c.segmenter.r_init; }));
    f.push_back(numeric<float>("segmenter.r_lower", [](auto& c) -> auto& { return c.segmenter.r_lower; }));
    f.push_back(numeric<float>("segmenter.r_upper", [](auto& c) -> auto& { return c.segmenter.r_upper; }));
    f.push_back(numeric<float>("segmenter.r_scale", [](auto& c) -> auto& { return c.segmenter.r_scale; }));
    f.push_back(numeric<float>("segmenter.r_adapt", [](auto& c) -> auto& { return c.segmenter.r_adapt; }));
    f.push_back(numeric<float>("segmenter.t_init", [](auto& c) -> auto& { return c.segmenter.t_init; }));
    f.push_back(numeric<float>("segmenter.t_lower", [](auto& c) -> auto& { return c.segmenter.t_lower; }));
    f.push_back(numeric<float>("segmenter.t_upper", [](auto& c) -> auto& { return c.segmenter.t_upper; }));
    f.push_back(numeric<float>("segmenter.t_inc", [](auto& c) -> auto& { return c.segmenter.t_inc; }));
    f.push_back(numeric<float>("segmenter.t_dec", [](auto& c) -> auto& { return c.segmenter.t_dec; }));
    f.push_back(numeric<int>("segmenter.init_noise", [](auto& c) -> auto& { return c.segmenter.init_noise; }));
    f.push_back(numeric<std::uint64_t>("seed", [](auto& c) -> auto& { return c.segmenter.rng_seed; }));
    f.push_back(numeric<std::int64_t>("blobs.min_area", [](auto& c) -> auto& { return c.blobs.min_area; }));
    f.push_back(numeric<std::int64_t>("blobs.max_area", [](auto& c) -> auto& { return c.blobs.max_area; }));
    f.push_back(numeric<int>("blobs.border_margin", [](auto& c) -> auto& { return c.blobs.border_margin; }));
    f.push_back(numeric<int>("blobs.connectivity", [](auto& c) -> auto& { return c.blobs.connectivity; }));
    f.push_back(numeric<int>("manager.edge_stop_margin", [](auto& c) -> auto& { return c.manager.edge_stop_margin; }));
    f.push_back(numeric<double>("manager.new_object_iou_threshold",
                                [](auto& c) -> auto& { return c.manager.new_object_iou_threshold; }));
    f.push_back({"tracker",
                 [](PipelineConfig& c, const std::string&, const std::string& v) { c.tracker.kind = TrackerKind::parse(v); },
                 [](const PipelineConfig& c) { return c.tracker.kind.to_string(); }});
    f.push_back(numeric<double>("tracker.context_factor", [](auto& c) -> auto& { return c.tracker.context_factor; }));
    f.push_back(numeric<int>("tracker.template_pad", [](auto& c) -> auto& { return c.tracker.template_pad; }));
    f.push_back({"pipeline.drop_policy",
                 [](PipelineConfig& c, const std::string& k, const std::string& v) {
                   if (v == "process_every")
                     c.drop_policy = DropPolicy::ProcessEvery;
                   else if (v == "drop_to_latest")
                     c.drop_policy = DropPolicy::DropToLatest;
                   else
                     bad_value(k, v);
                 },
                 [](const PipelineConfig& c) {
                   return std::string(c.drop_policy == DropPolicy::ProcessEvery ? "process_every" : "drop_to_latest");
                 }});
    f.push_back(numeric<double>("pipeline.live_fps", [](auto& c) -> auto& { return c.live_fps; }));
    f.push_back({"source", [](PipelineConfig& c, const std::string&, const std::string& v) { c.source = v; },
                 [](const PipelineConfig& c) { return c.source; }});
    f.push_back({"out", [](PipelineConfig& c, const std::string&, const std::string& v) { c.sink.dir = v; },
                 [](const PipelineConfig& c) { return c.sink.dir.string(); }});
    f.push_back(boolean("output.masks", [](auto& c) -> auto& { return c.sink.write_masks; }));
    f.push_back(boolean("output.frames", [](auto& c) -> auto& { return c.sink.write_frames; }));
    f.push_back(boolean("output.log", [](auto& c) -> auto& { return c.sink.write_log; }));
    return f;
  }();
  return table;
}

}  // namespace

void PipelineConfig::validate() const {
  segmenter.validate();
  blobs.validate();
  manager.validate();
  if (!(tracker.context_factor >= 1.0)) throw Error(ErrorCode::InvalidConfig, "tracker.context_factor must be >= 1");
  if (tracker.template_pad < 0) throw Error(ErrorCode::InvalidConfig, "tracker.template_pad must be >= 0");
  if (live_fps < 0) throw Error(ErrorCode::InvalidConfig, "pipeline.live_fps must be >= 0");
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> entries;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || trim(line.substr(0, eq)).empty())
      throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": expected 'key = value'");
    entries[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return entries;
}

void apply_key_value(const std::string& key, const std::string& value, PipelineConfig& config) {
  for (const Field& f : fields()) {
    if (key == f.key) {
      f.set(config, key, value);
      return;
    }
  }
  throw Error(ErrorCode::InvalidConfig, "unknown configuration key '" + key + "'");
}

void apply_key_values(const std::map<std::string, std::string>& entries, PipelineConfig& config) {
  for (const auto& [key, value] : entries) apply_key_value(key, value, config);
}

PipelineConfig load_config_file(const std::filesystem::path& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  apply_key_values(parse_key_values(text.str()), base);
  return base;
}

std::string dump_config(const PipelineConfig& config) {
  std::string out;
  for (const Field& f : fields()) out += std::string(f.key) + " = " + f.get(config) + "\n";
  return out;
}

}  // namespace edgetrack
