#include "pacebench/benchmark.h"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "pacebench/error.h"
#include "pacebench/run_store.h"
#include "test_support.h"

namespace pacebench {
namespace {

using nlohmann::json;
using testing::BinPath;
using testing::OneSequenceManifest;
using testing::ReadText;
using testing::TempDir;
using testing::WriteRawVideo;
using testing::WriteText;

json MockProfile(const std::string& name, std::vector<std::string> extra = {}) {
  std::vector<std::string> cmd = {BinPath("pacebench-mock-encoder").string(),
                                  "--bitrate", "{bitrate_kbps}", "--fps", "{fps}",
                                  "--width", "{width}", "--height", "{height}",
                                  "--output", "{output}"};
  cmd.insert(cmd.end(), extra.begin(), extra.end());
  return {{"name", name}, {"command", cmd}};
}

json BaseConfig() {
  return {{"manifest", "manifest.json"},
          {"output_dir", "out"},
          {"bitrates_kbps", {500, 1000, 2000}},
          {"profiles", {MockProfile("a"), MockProfile("b", {"--quality-gain", "1.5"})}},
          {"metric",
           {{"command",
             {BinPath("pacebench-mock-metric").string(), "--reference", "{reference}",
              "--distorted", "{distorted}", "--report", "{report_out}", "--scale-bytes",
              "50000"}}}}};
}

ErrorCode ConfigCode(const json& doc) {
  try {
    ParseBenchmarkConfig(doc.dump(), "/base");
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "accepted " << doc.dump();
  return ErrorCode::kUsage;
}

TEST(BenchmarkConfig, ParsesAndResolvesPaths) {
  const BenchmarkConfig c = ParseBenchmarkConfig(BaseConfig().dump(), "/base");
  EXPECT_EQ(c.manifest_path, "/base/manifest.json");
  EXPECT_EQ(c.output_dir, "/base/out");
  EXPECT_EQ(c.bitrates_kbps, (std::vector<int64_t>{500, 1000, 2000}));
  EXPECT_EQ(c.profiles.size(), 2u);
  EXPECT_EQ(c.repetitions, 1);
  EXPECT_EQ(c.modes.size(), 2u);
  ASSERT_TRUE(c.metric.has_value());
}

TEST(BenchmarkConfig, TenStepLadderAccepted) {
  json doc = BaseConfig();
  doc["bitrates_kbps"] = {800, 900, 1000, 1250, 1500, 1750, 2000, 2500, 5000, 10000};
  EXPECT_EQ(ParseBenchmarkConfig(doc.dump(), "/").bitrates_kbps.size(), 10u);
}

TEST(BenchmarkConfig, RejectsInvalidFields) {
  json doc = BaseConfig();
  doc["bitrates_kbps"] = json::array();
  EXPECT_EQ(ConfigCode(doc), ErrorCode::kConfig);
  doc["bitrates_kbps"] = {1000, 800};
  EXPECT_EQ(ConfigCode(doc), ErrorCode::kConfig);
  doc["bitrates_kbps"] = {0, 800};
  EXPECT_EQ(ConfigCode(doc), ErrorCode::kConfig);
  doc["bitrates_kbps"] = {800, 800};
  EXPECT_EQ(ConfigCode(doc), ErrorCode::kConfig);

  doc = BaseConfig();
  doc["profiles"] = {MockProfile("a"), MockProfile("a")};
  EXPECT_EQ(ConfigCode(doc), ErrorCode::kConfig);

  doc = BaseConfig();
  doc["profiles"] = {{{"name", "x"}, {"command", {"enc", "{output}"}}}};
  EXPECT_EQ(ConfigCode(doc), ErrorCode::kTemplate);

  doc = BaseConfig();
  doc["repetitions"] = 0;
  EXPECT_EQ(ConfigCode(doc), ErrorCode::kConfig);

  EXPECT_EQ(ConfigCode(json::array()), ErrorCode::kConfig);
}

TEST(BenchFilter, Parses) {
  const BenchFilter f = ParseBenchFilter("profile=x264,seq=BS25,seq=DT50");
  EXPECT_TRUE(f.Accepts("x264", "BS25"));
  EXPECT_TRUE(f.Accepts("x264", "DT50"));
  EXPECT_FALSE(f.Accepts("vp9", "BS25"));
  EXPECT_FALSE(f.Accepts("x264", "CR50"));
  EXPECT_TRUE(ParseBenchFilter("").Accepts("any", "thing"));
  EXPECT_THROW(ParseBenchFilter("codec=x"), Error);
  EXPECT_THROW(ParseBenchFilter("profile"), Error);
}

class BenchmarkRun : public ::testing::Test {
 protected:
  void SetUp() override {
    // 60 frames keeps n / (n - 1) under the 2% paced-throughput allowance.
    WriteRawVideo(dir_ / "s.yuv", 16, 16, 60);
    WriteText(dir_ / "manifest.json", OneSequenceManifest("S100", "s.yuv", 100, 16, 16, 60));
    manifest_ = LoadManifest(dir_ / "manifest.json");
  }

  BenchmarkConfig Config(const json& doc) {
    return ParseBenchmarkConfig(doc.dump(), dir_.path());
  }

  TempDir dir_;
  std::vector<VideoSequence> manifest_;
};

TEST_F(BenchmarkRun, WritesRecordsIndexAndMetrics) {
  const BenchmarkConfig config = Config(BaseConfig());
  const BenchOutcome outcome = RunBenchmark(config, manifest_);
  EXPECT_TRUE(outcome.failures.empty());
  ASSERT_EQ(outcome.records.size(), 12u);  // 2 profiles x 3 bitrates x 2 modes

  const auto out = dir_ / "out";
  const auto index = ParseRunsCsv(ReadText(out / "runs.csv"));
  EXPECT_EQ(index.size(), 12u);
  EXPECT_EQ(LoadManifest(out / "manifest.json").size(), 1u);
  for (const auto& r : outcome.records) {
    EXPECT_TRUE(std::filesystem::exists(out / "runs" / (RunId(r) + ".json")));
    if (r.mode == RunMode::kPaced) {
      EXPECT_TRUE(r.pacing.has_value());
      EXPECT_LE(r.throughput_fps, 102.0);
      EXPECT_FALSE(r.quality_report.has_value());
    } else {
      ASSERT_TRUE(r.quality_report.has_value());
      EXPECT_TRUE(std::filesystem::exists(out / *r.quality_report));
    }
  }

  const auto curves = CurvesFromRuns(LoadRunRecords(out), out);
  ASSERT_EQ(curves.size(), 2u);
  const auto& a = curves.at({"a", "S100"});
  const auto& b = curves.at({"b", "S100"});
  ASSERT_EQ(a.points.size(), 3u);
  // Same bytes, higher gain: b scores higher at every rate.
  for (size_t i = 0; i < 3; ++i) {
    // The mock header line differs by two bytes between the profiles.
    EXPECT_NEAR(a.points[i].rate_kbps, b.points[i].rate_kbps, 0.5);
    EXPECT_LT(a.points[i].quality, b.points[i].quality);
  }

  const std::string tp = ThroughputCsv(outcome.records, manifest_);
  EXPECT_EQ(tp.substr(0, tp.find('\n')),
            "profile,mode,fps_group,bitrate_kbps,mean_fps,std_fps,count");
  EXPECT_NE(tp.find("a,paced,100,500,"), std::string::npos) << tp;
  EXPECT_NE(tp.find("b,unpaced,100,2000,"), std::string::npos) << tp;
}

TEST_F(BenchmarkRun, FailuresAreCollected) {
  json doc = BaseConfig();
  doc.erase("metric");
  doc["modes"] = {"unpaced"};
  doc["profiles"] = {MockProfile("good"), MockProfile("bad", {"--exit-code", "4"})};
  const BenchOutcome outcome = RunBenchmark(Config(doc), manifest_);
  EXPECT_EQ(outcome.records.size(), 3u);
  ASSERT_EQ(outcome.failures.size(), 3u);
  EXPECT_EQ(outcome.failures[0].code, ErrorCode::kProcess);
  EXPECT_EQ(ParseRunsCsv(ReadText(dir_ / "out" / "runs.csv")).size(), 3u);
}

TEST_F(BenchmarkRun, FilterAndParallelUnpaced) {
  json doc = BaseConfig();
  doc.erase("metric");
  doc["modes"] = {"unpaced"};
  doc["unpaced_jobs"] = 3;
  doc["repetitions"] = 2;
  const BenchOutcome outcome = RunBenchmark(Config(doc), manifest_, ParseBenchFilter("profile=b"));
  EXPECT_TRUE(outcome.failures.empty());
  ASSERT_EQ(outcome.records.size(), 6u);
  for (const auto& r : outcome.records) EXPECT_EQ(r.profile_name, "b");
  EXPECT_THROW(RunBenchmark(Config(doc), manifest_, ParseBenchFilter("seq=none")), Error);
}

TEST_F(BenchmarkRun, CurvesFromDroppedInReports) {
  json doc = BaseConfig();
  doc.erase("metric");
  doc["modes"] = {"paced"};
  doc["profiles"] = {MockProfile("a")};
  RunBenchmark(Config(doc), manifest_);
  const auto out = dir_ / "out";
  const auto records = LoadRunRecords(out);
  EXPECT_TRUE(CurvesFromRuns(records, out).empty());
  for (const auto& r : records) {
    const double q = 30.0 + r.target_bitrate_kbps / 100.0;
    WriteText(out / "metrics" / QualityReportName(r),
              "{\"metric\": \"vmaf\", \"pooled\": " + std::to_string(q) + "}");
  }
  const auto curves = CurvesFromRuns(records, out);
  ASSERT_EQ(curves.size(), 1u);
  EXPECT_EQ(curves.begin()->second.points.size(), 3u);
}

}  // namespace
}  // namespace pacebench
