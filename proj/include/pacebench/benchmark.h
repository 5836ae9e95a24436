#ifndef PACEBENCH_BENCHMARK_H_
#define PACEBENCH_BENCHMARK_H_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pacebench/aggregate_report.h"
#include "pacebench/dataset.h"
#include "pacebench/encoder_harness.h"
#include "pacebench/quality.h"

namespace pacebench {

struct BenchmarkConfig {
  std::filesystem::path manifest_path;
  std::filesystem::path output_dir;
  std::vector<EncoderProfile> profiles;
  std::vector<std::string> sequences;  // empty means every manifest entry
  std::vector<int64_t> bitrates_kbps;
  std::set<RunMode> modes = {RunMode::kPaced, RunMode::kUnpaced};
  int repetitions = 1;
  int unpaced_jobs = 1;  // >1 runs unpaced encodes concurrently
  std::optional<MetricTool> metric;
};

// Relative paths in the config resolve against |base_dir|. Throws kConfig
// (or kTemplate for a bad command) on any invalid field.
BenchmarkConfig ParseBenchmarkConfig(std::string_view json_text,
                                     const std::filesystem::path& base_dir);
BenchmarkConfig LoadBenchmarkConfig(const std::filesystem::path& path);

// Narrows a benchmark to some profiles and/or sequences.
struct BenchFilter {
  std::set<std::string> profiles;
  std::set<std::string> sequences;

  bool Accepts(const std::string& profile, const std::string& seq) const;
};

// Parses "profile=a,seq=b" (keys may repeat). Throws kUsage.
BenchFilter ParseBenchFilter(std::string_view text);

struct BenchFailure {
  std::string run_id;
  ErrorCode code = ErrorCode::kProcess;
  std::string message;
};

struct BenchOutcome {
  std::vector<RunRecord> records;
  std::vector<BenchFailure> failures;
};

// Runs every (profile, sequence, bitrate, repetition, mode) combination and
// writes runs/<id>.json, runs.csv, manifest.json and, with a metric tool,
// metrics/<name>.json under the output directory. Failed runs are logged
// and collected rather than aborting the whole benchmark.
BenchOutcome RunBenchmark(const BenchmarkConfig& config,
                          const std::vector<VideoSequence>& manifest,
                          const BenchFilter& filter = {});

// One curve per (profile, sequence). Unpaced records are used when a pair
// has any with quality reports, paced ones otherwise; repetitions at the
// same target bitrate are averaged. Quality comes from the record's report
// path or metrics/<name>.json under |runs_dir|. Pairs that cannot form a
// curve are skipped with a warning.
std::map<CurveKey, RateQualityCurve> CurvesFromRuns(std::span<const RunRecord> records,
                                                    const std::filesystem::path& runs_dir);

// profile,mode,fps_group,bitrate_kbps,mean_fps,std_fps,count: throughput
// across the sequences of each frame-rate group.
std::string ThroughputCsv(std::span<const RunRecord> records,
                          std::span<const VideoSequence> sequences);

}  // namespace pacebench

#endif  // PACEBENCH_BENCHMARK_H_
