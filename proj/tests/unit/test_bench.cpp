#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "edgetrack/bench.hpp"
#include "edgetrack/error.hpp"
#include "edgetrack/pipeline.hpp"
#include "edgetrack/scene.hpp"
#include "test_support.hpp"

namespace edgetrack {
namespace {

using testing::TempDir;
using testing::thrown_code;

void write_atomically(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  { std::ofstream(tmp) << text; }
  std::filesystem::rename(tmp, path);
}

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<nlohmann::json> rows;
  for (std::string line; std::getline(in, line);) rows.push_back(nlohmann::json::parse(line));
  return rows;
}

TEST(BenchCsv, EmptyRunIsHeaderOnly) {
  EXPECT_EQ(bench_csv({}), std::string(kBenchCsvHeader) + "\n");
  EXPECT_EQ(bench_csv({}, {"a", "b"}), "# a\n# b\n" + std::string(kBenchCsvHeader) + "\n");
}

TEST(BenchCsv, RowFormat) {
  BenchRecord r{2, 125.0, 8.0, 7.5, 12.25, 300, std::nullopt};
  EXPECT_EQ(bench_csv({r}), std::string(kBenchCsvHeader) + "\n2,125.0000,8.0000,7.5000,12.2500,300,\n");
  r.power_mw = 5000;
  EXPECT_EQ(bench_csv({r}), std::string(kBenchCsvHeader) + "\n2,125.0000,8.0000,7.5000,12.2500,300,5000.0000\n");
}

TEST(Percentile, NearestRank) {
  std::vector<double> v;
  for (int i = 100; i >= 1; --i) v.push_back(i);
  EXPECT_EQ(percentile(v, 50), 50);
  EXPECT_EQ(percentile(v, 99), 99);
  EXPECT_EQ(percentile(v, 100), 100);
  EXPECT_EQ(percentile(v, 0), 1);
  EXPECT_EQ(percentile({3.0}, 99), 3.0);
  EXPECT_EQ(percentile({}, 50), 0.0);
  EXPECT_EQ(percentile({1, 2, 3, 4}, 50), 2);
}

TEST(Power, ReadsSensorFile) {
  TempDir dir;
  write_atomically(dir / "s", "5000\n");
  EXPECT_EQ(sample_power(dir / "s"), 5000.0);
  write_atomically(dir / "s", "watts?\n");
  EXPECT_EQ(sample_power(dir / "s"), std::nullopt);
  EXPECT_EQ(sample_power(dir / "missing"), std::nullopt);
  EXPECT_EQ(sample_power({}), std::nullopt);
}

TEST(Power, SamplerAveragesFluctuatingReadings) {
  TempDir dir;
  write_atomically(dir / "s", "4000\n");
  PowerSampler sampler(dir / "s", std::chrono::milliseconds(10));
  std::this_thread::sleep_for(std::chrono::milliseconds(60));
  write_atomically(dir / "s", "6000\n");
  std::this_thread::sleep_for(std::chrono::milliseconds(60));
  const auto mean = sampler.mean();
  ASSERT_TRUE(mean);
  EXPECT_GT(*mean, 4000.0);
  EXPECT_LT(*mean, 6000.0);
  EXPECT_GE(sampler.sample_count(), 4u);
}

TEST(Power, InertSamplerHasNoMean) {
  PowerSampler sampler({});
  EXPECT_EQ(sampler.mean(), std::nullopt);
  EXPECT_EQ(sampler.sample_count(), 0u);
}

TEST(BenchScene, GenerationIsByteIdenticalAndMatchesRenderer) {
  TempDir a, b;
  const SyntheticSceneSpec spec = bench_scene(2, 40, 5);
  generate_sequence(spec, a.path());
  generate_sequence(spec, b.path());
  auto src = open_image_sequence(a.path());
  for (int i = 1; i <= 40; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%06d.pgm", i);
    ASSERT_EQ(testing::read_file(a / name), testing::read_file(b / name));
    const auto f = src->next();
    ASSERT_TRUE(f);
    ASSERT_EQ(f->luma, render_scene_frame(spec, i).luma);
  }
  EXPECT_FALSE(src->next());
}

TEST(BenchScene, ObjectsEnterOnScheduleAndStayInLanes) {
  const SyntheticSceneSpec spec = bench_scene(6, 400, 7);
  ASSERT_EQ(spec.objects.size(), 6u);
  const std::int64_t settled = bench_scene_settled_frame(6);
  for (std::size_t i = 0; i < 6; ++i) {
    const ObjectPath& p = spec.objects[i];
    EXPECT_EQ(p.enter_frame, 1 + 30 * std::int64_t(i));
    for (std::int64_t f = settled; f <= 400; ++f) {
      const BoundingBox b = p.box_at(f);
      ASSERT_TRUE(inside_frame(b, spec.dims));
      ASSERT_GE(border_distance(b, spec.dims), 8);
      for (std::size_t j = 0; j < i; ++j) ASSERT_EQ(area(intersect(b, spec.objects[j].box_at(f))), 0);
    }
  }
  EXPECT_EQ(thrown_code([] { bench_scene(7, 10, 1); }), ErrorCode::InvalidConfig);
}

TEST(BenchScene, SixObjectsAreAllTrackedBy200) {
  SceneSource src(bench_scene(6, 200, 7));
  Pipeline pipeline({});
  int created = 0, terminated = 0;
  std::size_t live = 0;
  while (auto f = src.next()) {
    const FrameRecord r = pipeline.process_frame(*f);
    for (const TrackEvent& e : r.events) (e.kind == TrackEvent::Kind::Create ? created : terminated)++;
    live = r.live_tracks.size();
  }
  EXPECT_EQ(created, 6);
  EXPECT_EQ(terminated, 0);
  EXPECT_EQ(live, 6u);
}

TEST(Measure, WarmupExcludedAndStatsConsistent) {
  TempDir dir;
  write_atomically(dir / "sensor", "5000\n");
  BenchOptions o;
  o.n_objects = {1};
  o.frames = 20;
  o.warmup = 7;
  o.raw_dump = dir / "raw.jsonl";
  o.power_sensor = dir / "sensor";
  const auto records = measure(o);
  ASSERT_EQ(records.size(), 1u);
  const BenchRecord& r = records[0];
  EXPECT_EQ(r.n_objects, 1);
  EXPECT_EQ(r.frames, 20);
  EXPECT_NEAR(r.fps, 1000.0 / r.mean_frame_ms, 1e-9);
  EXPECT_LE(r.p50_ms, r.p99_ms);
  EXPECT_EQ(r.power_mw, 5000.0);

  const auto rows = read_jsonl(o.raw_dump);
  std::int64_t first_live = -1, measured = 0;
  double sum = 0;
  for (const auto& row : rows) {
    if (first_live < 0 && row["live_tracks"] == 1) first_live = row["frame"];
    const bool m = row["measured"];
    EXPECT_EQ(m, first_live >= 0 && row["frame"].get<std::int64_t>() >= first_live + 7);
    if (m) {
      ++measured;
      sum += row["ms"].get<double>();
      EXPECT_EQ(row["live_tracks"], 1);
    }
  }
  EXPECT_GT(first_live, 1);
  EXPECT_EQ(measured, 20);
  EXPECT_NEAR(sum / 20, r.mean_frame_ms, 1e-9);
  EXPECT_EQ(rows.back()["frame"].get<std::int64_t>(), first_live + 7 + 19);
}

TEST(Measure, FromGeneratedSequenceDirectory) {
  TempDir dir;
  BenchOptions o;
  o.n_objects = {2};
  o.frames = 5;
  o.warmup = 0;
  o.sequence_dir = dir.path();
  const auto first = measure(o);
  ASSERT_TRUE(std::filesystem::exists(dir / "n2" / "frame_000001.pgm"));
  EXPECT_EQ(first.at(0).frames, 5);
  EXPECT_EQ(first.at(0).power_mw, std::nullopt);
}

TEST(Measure, ShortSequenceIsMeasurementFailure) {
  TempDir dir;
  generate_sequence(bench_scene(1, 15, 7), dir / "n1");
  BenchOptions o;
  o.n_objects = {1};
  o.frames = 20;
  o.sequence_dir = dir.path();
  EXPECT_EQ(thrown_code([&] { measure(o); }), ErrorCode::MeasurementFailure);
}

TEST(Measure, RejectsBadOptions) {
  BenchOptions o;
  o.n_objects = {0};
  EXPECT_EQ(thrown_code([&] { measure(o); }), ErrorCode::InvalidConfig);
  o.n_objects = {1};
  o.frames = 0;
  EXPECT_EQ(thrown_code([&] { measure(o); }), ErrorCode::InvalidConfig);
  o.frames = 10;
  o.pipeline.blobs.min_area = 0;
  EXPECT_EQ(thrown_code([&] { measure(o); }), ErrorCode::InvalidConfig);
}

TEST(Measure, SequenceLengthCoversProtocol) {
  for (int n = 1; n <= 6; ++n) EXPECT_GE(bench_sequence_length(n), bench_scene_settled_frame(n) + 50 + 300);
}

TEST(BenchMetadata, DescribesSceneAndProtocol) {
  BenchOptions o;
  o.seed = 99;
  const auto lines = bench_metadata(o);
  std::string all;
  for (const auto& l : lines) all += l + "\n";
  EXPECT_NE(all.find("seed 99"), std::string::npos);
  EXPECT_NE(all.find("50 warm-up"), std::string::npos);
  EXPECT_NE(all.find("tracker: fallback"), std::string::npos);
}

TEST(ReferenceData, JetsonMaxNCurves) {
  std::ifstream in(std::filesystem::path(EDGETRACK_REFERENCE_DATA) / "reference_framerate.csv");
  ASSERT_TRUE(in);
  std::map<std::string, std::vector<double>> curves;
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#' || line.rfind("mode,", 0) == 0) continue;
    std::istringstream row(line);
    std::string mode, clocks, n, fps;
    std::getline(row, mode, ',');
    std::getline(row, clocks, ',');
    std::getline(row, n, ',');
    std::getline(row, fps, ',');
    auto& curve = curves[mode + "/" + clocks];
    EXPECT_EQ(std::stoi(n), int(curve.size()) + 1) << line;
    curve.push_back(std::stod(fps));
    ++rows;
  }
  EXPECT_EQ(rows, 60u);
  EXPECT_EQ(curves["max_n/normal"], (std::vector<double>{10.9, 8.6, 6.8, 5.4, 4.7, 3.9}));
  EXPECT_EQ(curves["max_n/full"], (std::vector<double>{16.2, 9.5, 7.4, 6.1, 5.2, 4.5}));
  for (const auto& [name, curve] : curves)
    EXPECT_TRUE(std::is_sorted(curve.rbegin(), curve.rend())) << name << " fps falls with load";
}

}  // namespace
}  // namespace edgetrack
