#include "pacebench/benchmark.h"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "csv.h"
#include "pacebench/atomic_file.h"
#include "pacebench/error.h"
#include "pacebench/run_store.h"

namespace pacebench {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path Resolve(const fs::path& base, const fs::path& p) {
  return p.is_absolute() ? p : base / p;
}

std::vector<std::string> StringList(const json& value, const std::string& what) {
  if (!value.is_array()) throw Error(ErrorCode::kConfig, what + " must be an array");
  std::vector<std::string> out;
  for (const auto& v : value) {
    if (!v.is_string()) throw Error(ErrorCode::kConfig, what + " must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

EncoderProfile ParseProfile(const json& entry, size_t index) {
  const std::string where = "profiles[" + std::to_string(index) + "]";
  if (!entry.is_object()) throw Error(ErrorCode::kConfig, where + " must be an object");
  EncoderProfile profile;
  if (!entry.contains("name") || !entry["name"].is_string()) {
    throw Error(ErrorCode::kConfig, where + " needs a string 'name'");
  }
  profile.name = entry["name"].get<std::string>();
  if (!entry.contains("command")) {
    throw Error(ErrorCode::kConfig, where + " needs a 'command' token array");
  }
  profile.command_template = StringList(entry["command"], where + ".command");
  if (profile.command_template.empty()) {
    throw Error(ErrorCode::kConfig, where + ".command is empty");
  }
  profile.input_mode = ParseInputMode(entry.value("input_mode", std::string("stdin_raw")));
  profile.output_mode = ParseOutputMode(entry.value("output_mode", std::string("file")));
  ValidateProfile(profile);
  return profile;
}

struct Job {
  const EncoderProfile* profile;
  const VideoSequence* sequence;
  int64_t bitrate_kbps;
  int repetition;
  RunMode mode;
};

fs::path StreamPath(const fs::path& out_dir, const RunRecord& key) {
  return out_dir / "streams" / (RunId(key) + ".bin");
}

RunRecord KeyFor(const Job& job) {
  RunRecord key;
  key.profile_name = job.profile->name;
  key.sequence_short_name = job.sequence->short_name;
  key.target_bitrate_kbps = job.bitrate_kbps;
  key.mode = job.mode;
  key.repetition = job.repetition;
  return key;
}

class JobRunner {
 public:
  JobRunner(const BenchmarkConfig& config, BenchOutcome& outcome)
      : config_(config), outcome_(outcome) {}

  void Run(const Job& job) {
    const RunRecord key = KeyFor(job);
    const std::string id = RunId(key);
    RunRequest request{job.profile, job.sequence, job.bitrate_kbps, job.repetition,
                       StreamPath(config_.output_dir, key)};
    spdlog::info("run {}", id);
    try {
      RunRecord record = RunEncoder(request, job.mode);
      SaveRunRecord(config_.output_dir, record);
      spdlog::info("run {}: {:.2f} fps, {:.1f} kbps", id, record.throughput_fps,
                   record.achieved_bitrate_kbps);
      std::lock_guard lock(mu_);
      outcome_.records.push_back(std::move(record));
    } catch (const RunError& e) {
      spdlog::error("run {} failed: {}", id, e.what());
      if (!e.diagnostics().empty()) spdlog::error("run {} stderr: {}", id, e.diagnostics());
      Fail(id, e);
    } catch (const Error& e) {
      spdlog::error("run {} failed: {}", id, e.what());
      Fail(id, e);
    }
  }

 private:
  void Fail(const std::string& id, const Error& e) {
    std::lock_guard lock(mu_);
    outcome_.failures.push_back({id, e.code(), e.what()});
  }

  const BenchmarkConfig& config_;
  BenchOutcome& outcome_;
  std::mutex mu_;
};

// Quality is measured once per encode setting, on the run that curves use.
void MeasureQuality(const BenchmarkConfig& config,
                    const std::vector<VideoSequence>& manifest, BenchOutcome& outcome) {
  const RunMode curve_mode =
      config.modes.count(RunMode::kUnpaced) ? RunMode::kUnpaced : RunMode::kPaced;
  for (auto& record : outcome.records) {
    if (record.mode != curve_mode) continue;
    const fs::path rel = fs::path("metrics") / QualityReportName(record);
    try {
      const VideoSequence& seq = FindSequence(manifest, record.sequence_short_name);
      const QualityReport report = RunMetricTool(*config.metric, seq, record.output_path,
                                                 config.output_dir / rel);
      spdlog::info("quality {}: {:.3f}", RunId(record), report.pooled_score);
      record.quality_report = rel;
      SaveRunRecord(config.output_dir, record);
    } catch (const Error& e) {
      spdlog::error("quality for {} failed: {}", RunId(record), e.what());
      outcome.failures.push_back({RunId(record), e.code(), e.what()});
    }
  }
}

std::optional<double> PooledQuality(const RunRecord& record, const fs::path& runs_dir) {
  std::vector<fs::path> candidates;
  if (record.quality_report) candidates.push_back(Resolve(runs_dir, *record.quality_report));
  candidates.push_back(runs_dir / "metrics" / QualityReportName(record));
  for (const auto& path : candidates) {
    if (fs::is_regular_file(path)) return ParseMetricReport(path).pooled_score;
  }
  return std::nullopt;
}

}  // namespace

BenchmarkConfig ParseBenchmarkConfig(std::string_view json_text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kConfig, std::string("benchmark config is not valid JSON: ") +
                                        e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kConfig, "benchmark config must be an object");

  try {
    BenchmarkConfig config;
    if (doc.contains("manifest")) {
      config.manifest_path = Resolve(base_dir, doc["manifest"].get<std::string>());
    }
    config.output_dir = Resolve(base_dir, doc.value("output_dir", std::string("bench-out")));

    if (!doc.contains("profiles") || !doc["profiles"].is_array() ||
        doc["profiles"].empty()) {
      throw Error(ErrorCode::kConfig, "config needs a non-empty 'profiles' array");
    }
    std::set<std::string> names;
    for (size_t i = 0; i < doc["profiles"].size(); ++i) {
      EncoderProfile profile = ParseProfile(doc["profiles"][i], i);
      if (!names.insert(profile.name).second) {
        throw Error(ErrorCode::kConfig, "duplicate profile name '" + profile.name + "'");
      }
      config.profiles.push_back(std::move(profile));
    }

    if (doc.contains("sequences")) config.sequences = StringList(doc["sequences"], "sequences");

    if (!doc.contains("bitrates_kbps") || !doc["bitrates_kbps"].is_array() ||
        doc["bitrates_kbps"].empty()) {
      throw Error(ErrorCode::kConfig, "config needs a non-empty 'bitrates_kbps' array");
    }
    for (const auto& b : doc["bitrates_kbps"]) {
      if (!b.is_number_integer() || b.get<int64_t>() <= 0) {
        throw Error(ErrorCode::kConfig, "bitrates must be positive integers (kbps)");
      }
      const int64_t kbps = b.get<int64_t>();
      if (!config.bitrates_kbps.empty() && kbps <= config.bitrates_kbps.back()) {
        throw Error(ErrorCode::kConfig, "bitrates must be strictly increasing");
      }
      config.bitrates_kbps.push_back(kbps);
    }

    if (doc.contains("modes")) {
      config.modes.clear();
      for (const auto& m : StringList(doc["modes"], "modes")) {
        config.modes.insert(ParseRunMode(m));
      }
      if (config.modes.empty()) throw Error(ErrorCode::kConfig, "'modes' is empty");
    }
    config.repetitions = doc.value("repetitions", 1);
    if (config.repetitions < 1) throw Error(ErrorCode::kConfig, "repetitions must be >= 1");
    config.unpaced_jobs = doc.value("unpaced_jobs", 1);
    if (config.unpaced_jobs < 1) throw Error(ErrorCode::kConfig, "unpaced_jobs must be >= 1");

    if (doc.contains("metric")) {
      const json& metric = doc["metric"];
      if (!metric.is_object() || !metric.contains("command")) {
        throw Error(ErrorCode::kConfig, "'metric' needs a 'command' token array");
      }
      config.metric = MetricTool{StringList(metric["command"], "metric.command")};
    }
    return config;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("benchmark config: ") + e.what());
  }
}

BenchmarkConfig LoadBenchmarkConfig(const fs::path& path) {
  return ParseBenchmarkConfig(ReadFileToString(path), path.parent_path());
}

bool BenchFilter::Accepts(const std::string& profile, const std::string& seq) const {
  return (profiles.empty() || profiles.count(profile)) &&
         (sequences.empty() || sequences.count(seq));
}

BenchFilter ParseBenchFilter(std::string_view text) {
  BenchFilter filter;
  size_t start = 0;
  while (start <= text.size()) {
    const size_t comma = std::min(text.find(',', start), text.size());
    const std::string_view item = text.substr(start, comma - start);
    start = comma + 1;
    if (item.empty()) continue;
    const size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq + 1 == item.size()) {
      throw Error(ErrorCode::kUsage, "--only expects key=value, got '" + std::string(item) + "'");
    }
    const std::string_view key = item.substr(0, eq);
    const std::string value(item.substr(eq + 1));
    if (key == "profile") {
      filter.profiles.insert(value);
    } else if (key == "seq") {
      filter.sequences.insert(value);
    } else {
      throw Error(ErrorCode::kUsage, "--only key must be profile or seq, got '" +
                                         std::string(key) + "'");
    }
  }
  return filter;
}

BenchOutcome RunBenchmark(const BenchmarkConfig& config,
                          const std::vector<VideoSequence>& manifest,
                          const BenchFilter& filter) {
  std::vector<const VideoSequence*> sequences;
  if (config.sequences.empty()) {
    for (const auto& seq : manifest) sequences.push_back(&seq);
  } else {
    for (const auto& name : config.sequences) {
      sequences.push_back(&FindSequence(manifest, name));
    }
  }

  std::vector<Job> unpaced, paced;
  for (const auto& profile : config.profiles) {
    for (const VideoSequence* seq : sequences) {
      if (!filter.Accepts(profile.name, seq->short_name)) continue;
      for (int64_t bitrate : config.bitrates_kbps) {
        for (int rep = 0; rep < config.repetitions; ++rep) {
          if (config.modes.count(RunMode::kUnpaced)) {
            unpaced.push_back({&profile, seq, bitrate, rep, RunMode::kUnpaced});
          }
          if (!config.modes.count(RunMode::kPaced)) continue;
          if (profile.input_mode == InputMode::kFile) {
            spdlog::warn("profile '{}' reads its input file itself; skipping paced runs",
                         profile.name);
            continue;
          }
          paced.push_back({&profile, seq, bitrate, rep, RunMode::kPaced});
        }
      }
    }
  }
  if (unpaced.empty() && paced.empty()) {
    throw Error(ErrorCode::kConfig, "the benchmark selects no runs");
  }

  fs::create_directories(config.output_dir / "runs");
  BenchOutcome outcome;
  JobRunner runner(config, outcome);

  // Paced runs stay sequential; they need an otherwise idle machine.
  const size_t workers =
      std::min<size_t>(static_cast<size_t>(config.unpaced_jobs), unpaced.size());
  if (workers > 1) {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (size_t i = next++; i < unpaced.size(); i = next++) runner.Run(unpaced[i]);
      });
    }
    for (auto& t : pool) t.join();
  } else {
    for (const auto& job : unpaced) runner.Run(job);
  }
  for (const auto& job : paced) runner.Run(job);

  if (config.metric) MeasureQuality(config, manifest, outcome);

  std::sort(outcome.records.begin(), outcome.records.end(),
            [](const RunRecord& a, const RunRecord& b) { return RunId(a) < RunId(b); });
  WriteFileAtomically(config.output_dir / "runs.csv",
                      RunsToCsv(LoadRunRecords(config.output_dir)));
  WriteFileAtomically(config.output_dir / "manifest.json", ManifestToJson(manifest));
  return outcome;
}

std::map<CurveKey, RateQualityCurve> CurvesFromRuns(std::span<const RunRecord> records,
                                                    const fs::path& runs_dir) {
  struct Acc {
    double kbps = 0.0;
    double quality = 0.0;
    int n = 0;
  };
  // [pair][mode][target bitrate]
  std::map<CurveKey, std::map<RunMode, std::map<int64_t, Acc>>> grouped;
  for (const auto& record : records) {
    const std::optional<double> quality = PooledQuality(record, runs_dir);
    if (!quality) continue;
    Acc& acc = grouped[{record.profile_name, record.sequence_short_name}][record.mode]
                      [record.target_bitrate_kbps];
    acc.kbps += record.achieved_bitrate_kbps;
    acc.quality += *quality;
    ++acc.n;
  }

  std::map<CurveKey, RateQualityCurve> curves;
  for (const auto& [key, by_mode] : grouped) {
    const auto& points = by_mode.count(RunMode::kUnpaced) ? by_mode.at(RunMode::kUnpaced)
                                                          : by_mode.at(RunMode::kPaced);
    std::vector<CurveSample> samples;
    for (const auto& [bitrate, acc] : points) {
      samples.push_back({acc.kbps / acc.n, acc.quality / acc.n});
    }
    try {
      curves.emplace(key, CollectCurve(std::move(samples), key.first + "@" + key.second));
    } catch (const Error& e) {
      spdlog::warn("no curve for {} on {}: {}", key.first, key.second, e.what());
    }
  }
  return curves;
}

std::string ThroughputCsv(std::span<const RunRecord> records,
                          std::span<const VideoSequence> sequences) {
  std::map<std::string, FrameRate> rate_of;
  for (const auto& seq : sequences) rate_of.emplace(seq.short_name, seq.fps);

  // (profile, mode, fps, fps label): groups sort by numeric frame rate.
  using GroupKey = std::tuple<std::string, RunMode, double, std::string>;
  std::map<GroupKey, std::vector<RunRecord>> groups;
  for (const auto& record : records) {
    const auto it = rate_of.find(record.sequence_short_name);
    if (it == rate_of.end()) {
      spdlog::warn("sequence '{}' is not in the manifest; left out of throughput",
                   record.sequence_short_name);
      continue;
    }
    groups[{record.profile_name, record.mode, it->second.fps(), it->second.ToString()}]
        .push_back(record);
  }

  std::string out = csv::JoinRow(
      {"profile", "mode", "fps_group", "bitrate_kbps", "mean_fps", "std_fps", "count"});
  for (const auto& [key, group] : groups) {
    const auto& [profile, mode, fps, fps_label] = key;
    for (const auto& [bitrate, stats] : ThroughputByBitrate(group)) {
      out += csv::JoinRow({profile, std::string(RunModeName(mode)), fps_label,
                           std::to_string(bitrate), csv::FormatDouble(stats.mean_fps),
                           csv::FormatDouble(stats.stddev_fps),
                           std::to_string(stats.count)});
    }
  }
  return out;
}

}  // namespace pacebench
