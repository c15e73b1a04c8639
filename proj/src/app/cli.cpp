#include "edgetrack/cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "edgetrack/bench.hpp"
#include "edgetrack/config.hpp"
#include "edgetrack/pipeline.hpp"
#include "edgetrack/scene.hpp"

namespace edgetrack {

namespace {

std::vector<int> parse_objects(const std::string& csv) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const std::size_t comma = std::min(csv.find(',', pos), csv.size());
    const std::string item = csv.substr(pos, comma - pos);
    int n = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), n);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size() || n < 1)
      throw Error(ErrorCode::InvalidConfig, "--objects expects positive integers separated by commas, got '" + csv + "'");
    out.push_back(n);
    pos = comma + 1;
  }
  return out;
}

std::pair<std::string, std::string> split_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw Error(ErrorCode::InvalidConfig, "--set expects key=value, got '" + text + "'");
  return {text.substr(0, eq), text.substr(eq + 1)};
}

PipelineConfig effective_config(const CliInvocation& inv) {
  PipelineConfig config;
  if (!inv.config_path.empty()) config = load_config_file(inv.config_path);
  for (const auto& [key, value] : inv.overrides) apply_key_value(key, value, config);
  return config;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!(f << text)) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
}

int run_command(const CliInvocation& inv, std::ostream& out) {
  PipelineConfig config = effective_config(inv);
  if (inv.dump_config) {
    out << dump_config(config);
    return kExitOk;
  }
  if (config.source.empty()) throw Error(ErrorCode::InvalidConfig, "no source given (--source or source = ...)");
  out << run_pipeline(config).to_json() << '\n';
  return kExitOk;
}

int bench_command(const CliInvocation& inv, std::ostream& out) {
  BenchOptions options;
  options.pipeline = effective_config(inv);
  if (inv.dump_config) {
    out << dump_config(options.pipeline);
    return kExitOk;
  }
  options.n_objects = inv.objects;
  if (inv.frames) options.frames = *inv.frames;
  options.warmup = inv.warmup;
  options.seed = options.pipeline.segmenter.rng_seed;
  options.sequence_dir = inv.sequence_dir;
  options.power_sensor = inv.power_sensor;
  const std::filesystem::path out_dir = options.pipeline.sink.dir;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    options.raw_dump = out_dir / "bench_frames.jsonl";
  }
  const std::string csv = bench_csv(measure(options), bench_metadata(options));
  if (!out_dir.empty()) write_text(out_dir / "bench.csv", csv);
  out << csv;
  return kExitOk;
}

int gen_command(const CliInvocation& inv, std::ostream& out) {
  const PipelineConfig config = effective_config(inv);
  const std::filesystem::path dir = config.sink.dir;
  if (dir.empty()) throw Error(ErrorCode::InvalidConfig, "gen needs --out");
  nlohmann::ordered_json written = nlohmann::ordered_json::array();
  for (int n : inv.objects) {
    const std::int64_t frames = inv.frames ? *inv.frames : bench_sequence_length(n);
    const SyntheticSceneSpec spec = bench_scene(n, frames, config.segmenter.rng_seed);
    const std::filesystem::path target = dir / ("n" + std::to_string(n));
    generate_sequence(spec, target);
    written.push_back({{"n_objects", n}, {"frames", frames}, {"dir", target.string()}});
  }
  out << written.dump() << '\n';
  return kExitOk;
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownFlag:
    case ErrorCode::MissingSubcommand:
    case ErrorCode::ConflictingFlags:
      return kExitUsage;
    case ErrorCode::NoFramesFound:
    case ErrorCode::MalformedImage:
    case ErrorCode::UnsupportedChroma:
    case ErrorCode::TruncatedStream:
    case ErrorCode::IoFailure:
    case ErrorCode::DimsMismatch:
    case ErrorCode::ModelLoadFailure:
    case ErrorCode::SourceFailure:
    case ErrorCode::SinkFailure:
      return kExitIo;
    case ErrorCode::InvalidConfig:
      return kExitConfig;
    case ErrorCode::OutOfFrame:
    case ErrorCode::BoxTooSmall:
    case ErrorCode::DegenerateSearchRegion:
    case ErrorCode::MeasurementFailure:
      return kExitRuntime;
  }
  return kExitRuntime;
}

std::optional<CliInvocation> parse_args(int argc, const char* const* argv, std::ostream& out) {
  CliInvocation inv;
  CLI::App app{"Multi-object tracking on background-subtracted video"};
  app.name("edgetrack");
  app.require_subcommand(0, 1);

  std::string config_path, source, out_dir, tracker, drop_policy, objects, power_sensor, sequence_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> live_fps;
  std::optional<std::int64_t> frames;
  std::int64_t warmup = 50;
  std::vector<std::string> sets;
  bool dump = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Flat key = value configuration file");
    sub->add_option("--seed", seed, "RNG seed (segmenter; scene for gen/bench)");
    sub->add_option("--tracker", tracker, "fallback | model:<path>");
    sub->add_option("--set", sets, "Extra key=value override, repeatable");
    sub->add_flag("--dump-config", dump, "Print the effective configuration and exit");
  };

  CLI::App* run = app.add_subcommand("run", "Run the pipeline over a sequence or Y4M file");
  common(run);
  run->add_option("--source", source, "Image-sequence directory or .y4m file");
  run->add_option("--out", out_dir, "Output directory for masks, frames and tracks.jsonl");
  run->add_option("--drop-policy", drop_policy, "process_every | drop_to_latest");
  run->add_option("--live-fps", live_fps, "Replay paced like a live camera at this rate");

  CLI::App* bench = app.add_subcommand("bench", "Frame rate versus number of tracked objects");
  common(bench);
  bench->add_option("--objects", objects, "Comma-separated object counts")->default_str("1,2,3,4,5,6");
  bench->add_option("--frames", frames, "Measured frames per object count (default 300)");
  bench->add_option("--warmup", warmup, "Frames discarded after all tracks start");
  bench->add_option("--sequence-dir", sequence_dir, "Read or generate sequences as <dir>/n<k>");
  bench->add_option("--power-sensor", power_sensor, "File holding an instantaneous milliwatt reading");
  bench->add_option("--out", out_dir, "Directory for bench.csv and the per-frame timing dump");
  bench->add_option("--drop-policy", drop_policy, "Must be process_every");

  CLI::App* gen = app.add_subcommand("gen", "Write synthetic bench sequences");
  common(gen);
  gen->add_option("--objects", objects, "Comma-separated object counts")->default_str("1,2,3,4,5,6");
  gen->add_option("--frames", frames, "Frames per sequence (default: what bench needs)");
  gen->add_option("--out", out_dir, "Output directory; one n<k> subdirectory per count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ExtrasError& e) {
    throw Error(ErrorCode::UnknownFlag, e.what());
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorCode::UnknownFlag, e.what());
  }

  if (app.get_subcommands().empty()) throw Error(ErrorCode::MissingSubcommand, "expected one of run, bench, gen");
  const CLI::App* chosen = app.get_subcommands().front();
  if (chosen == run)
    inv.command = CliInvocation::Command::Run;
  else if (chosen == bench)
    inv.command = CliInvocation::Command::Bench;
  else
    inv.command = CliInvocation::Command::Gen;

  if (inv.command == CliInvocation::Command::Bench && !drop_policy.empty() && drop_policy != "process_every")
    throw Error(ErrorCode::ConflictingFlags, "bench replays every frame; --drop-policy " + drop_policy + " conflicts");

  inv.config_path = config_path;
  inv.dump_config = dump;
  if (!source.empty()) inv.overrides.emplace_back("source", source);
  if (!out_dir.empty()) inv.overrides.emplace_back("out", out_dir);
  if (seed) inv.overrides.emplace_back("seed", std::to_string(*seed));
  if (!tracker.empty()) inv.overrides.emplace_back("tracker", tracker);
  if (!drop_policy.empty()) inv.overrides.emplace_back("pipeline.drop_policy", drop_policy);
  if (live_fps) inv.overrides.emplace_back("pipeline.live_fps", std::to_string(*live_fps));
  for (const std::string& s : sets) inv.overrides.push_back(split_assignment(s));

  if (inv.command != CliInvocation::Command::Run) inv.objects = parse_objects(objects.empty() ? "1,2,3,4,5,6" : objects);
  inv.frames = frames;
  if (frames && *frames < 1) throw Error(ErrorCode::InvalidConfig, "--frames must be >= 1");
  inv.warmup = warmup;
  inv.sequence_dir = sequence_dir;
  inv.power_sensor = power_sensor;
  return inv;
}

int execute(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
  try {
    switch (inv.command) {
      case CliInvocation::Command::Run: return run_command(inv, out);
      case CliInvocation::Command::Bench: return bench_command(inv, out);
      case CliInvocation::Command::Gen: return gen_command(inv, out);
    }
  } catch (const Error& e) {
    err << nlohmann::json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}}.dump() << '\n';
    return exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << nlohmann::json{{"error", "IoFailure"}, {"message", e.what()}}.dump() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << nlohmann::json{{"error", "Internal"}, {"message", e.what()}}.dump() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<CliInvocation> inv;
  try {
    inv = parse_args(argc, argv, out);
  } catch (const Error& e) {
    err << nlohmann::json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}}.dump() << '\n';
    if (e.code() == ErrorCode::MissingSubcommand || e.code() == ErrorCode::UnknownFlag)
      err << "usage: edgetrack {run|bench|gen} [options]; see --help\n";
    return exit_code_for(e.code());
  }
  if (!inv) return kExitOk;
  return execute(*inv, out, err);
}

}  // namespace edgetrack
