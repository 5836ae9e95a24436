#include "pacebench/run_store.h"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "csv.h"
#include "pacebench/atomic_file.h"
#include "pacebench/error.h"

namespace pacebench {
namespace {

using nlohmann::json;

const std::vector<std::string> kCsvColumns = {
    "profile", "seq",    "bitrate_kbps",   "mode",         "wall_time_s",
    "frames",  "throughput_fps", "output_bytes", "achieved_kbps"};

std::string Sanitize(std::string_view text) { return SafeFileStem(text); }

}  // namespace

std::string SafeFileStem(std::string_view text) {
  std::string out;
  for (char c : text) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '.' || c == '_';
    out += ok ? c : '_';
  }
  return out;
}

std::string RunId(const RunRecord& record) {
  return Sanitize(record.profile_name) + "__" + Sanitize(record.sequence_short_name) +
         "__" + std::to_string(record.target_bitrate_kbps) + "k__" +
         std::string(RunModeName(record.mode)) + "__r" + std::to_string(record.repetition);
}

std::string QualityReportName(const RunRecord& record) {
  return Sanitize(record.profile_name) + "__" + Sanitize(record.sequence_short_name) +
         "__" + std::to_string(record.target_bitrate_kbps) + "k__r" +
         std::to_string(record.repetition) + ".json";
}

std::string RunRecordToJson(const RunRecord& record) {
  json doc = {
      {"profile", record.profile_name},
      {"seq", record.sequence_short_name},
      {"bitrate_kbps", record.target_bitrate_kbps},
      {"mode", RunModeName(record.mode)},
      {"repetition", record.repetition},
      {"wall_time_s", record.wall_time_s},
      {"frames", record.frames_in},
      {"throughput_fps", record.throughput_fps},
      {"output_bytes", record.output_size_bytes},
      {"achieved_kbps", record.achieved_bitrate_kbps},
      {"exit_status", record.exit_status},
      {"output_path", record.output_path.string()},
  };
  if (record.quality_report) doc["quality_report"] = record.quality_report->string();
  if (record.pacing) {
    const PacingReport& p = *record.pacing;
    doc["pacing"] = {{"frames_sent", p.frames_sent},
                     {"total_duration_s", p.total_duration_s},
                     {"blocked_time_s", p.blocked_time_s},
                     {"lateness_s", p.lateness_s}};
  }
  return doc.dump(2) + "\n";
}

RunRecord RunRecordFromJson(std::string_view text) {
  try {
    const json doc = json::parse(text);
    RunRecord r;
    r.profile_name = doc.at("profile").get<std::string>();
    r.sequence_short_name = doc.at("seq").get<std::string>();
    r.target_bitrate_kbps = doc.at("bitrate_kbps").get<int64_t>();
    r.mode = ParseRunMode(doc.at("mode").get<std::string>());
    r.repetition = doc.value("repetition", 0);
    r.wall_time_s = doc.at("wall_time_s").get<double>();
    r.frames_in = doc.at("frames").get<int64_t>();
    r.throughput_fps = doc.at("throughput_fps").get<double>();
    r.output_size_bytes = doc.at("output_bytes").get<uint64_t>();
    r.achieved_bitrate_kbps = doc.at("achieved_kbps").get<double>();
    r.exit_status = doc.value("exit_status", 0);
    r.output_path = doc.value("output_path", std::string());
    if (doc.contains("quality_report")) {
      r.quality_report = doc["quality_report"].get<std::string>();
    }
    if (doc.contains("pacing")) {
      const json& p = doc["pacing"];
      PacingReport report;
      report.frames_sent = p.at("frames_sent").get<int64_t>();
      report.total_duration_s = p.at("total_duration_s").get<double>();
      report.blocked_time_s = p.at("blocked_time_s").get<double>();
      report.lateness_s = p.at("lateness_s").get<std::vector<double>>();
      r.pacing = std::move(report);
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed run record: ") + e.what());
  }
}

std::string RunsToCsv(const std::vector<RunRecord>& records) {
  std::string out = csv::JoinRow(kCsvColumns);
  for (const auto& r : records) {
    out += csv::JoinRow({r.profile_name, r.sequence_short_name,
                         std::to_string(r.target_bitrate_kbps),
                         std::string(RunModeName(r.mode)), csv::FormatDouble(r.wall_time_s),
                         std::to_string(r.frames_in), csv::FormatDouble(r.throughput_fps),
                         std::to_string(r.output_size_bytes),
                         csv::FormatDouble(r.achieved_bitrate_kbps)});
  }
  return out;
}

std::vector<RunRecord> ParseRunsCsv(std::string_view text) {
  const auto rows = csv::ParseRows(text);
  if (rows.empty() || rows[0] != kCsvColumns) {
    throw Error(ErrorCode::kParse, "runs.csv header does not match the expected columns");
  }
  std::vector<RunRecord> out;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != kCsvColumns.size()) {
      throw Error(ErrorCode::kParse,
                  "runs.csv row " + std::to_string(i) + " has the wrong field count");
    }
    RunRecord r;
    r.profile_name = row[0];
    r.sequence_short_name = row[1];
    r.target_bitrate_kbps = csv::ParseInt(row[2], "bitrate_kbps");
    r.mode = ParseRunMode(row[3]);
    r.wall_time_s = csv::ParseDouble(row[4], "wall_time_s");
    r.frames_in = csv::ParseInt(row[5], "frames");
    r.throughput_fps = csv::ParseDouble(row[6], "throughput_fps");
    r.output_size_bytes = static_cast<uint64_t>(csv::ParseInt(row[7], "output_bytes"));
    r.achieved_bitrate_kbps = csv::ParseDouble(row[8], "achieved_kbps");
    out.push_back(std::move(r));
  }
  return out;
}

void SaveRunRecord(const std::filesystem::path& dir, const RunRecord& record) {
  WriteFileAtomically(dir / "runs" / (RunId(record) + ".json"), RunRecordToJson(record));
}

std::vector<RunRecord> LoadRunRecords(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  const fs::path runs = dir / "runs";
  if (!fs::is_directory(runs)) {
    throw Error(ErrorCode::kIo, "no run records under " + runs.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(runs)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<RunRecord> out;
  for (const auto& f : files) {
    try {
      out.push_back(RunRecordFromJson(ReadFileToString(f)));
    } catch (const Error& e) {
      throw Error(e.code(), f.string() + ": " + e.what());
    }
  }
  return out;
}

}  // namespace pacebench
