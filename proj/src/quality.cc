#include "pacebench/quality.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "pacebench/atomic_file.h"
#include "pacebench/error.h"
#include "pacebench/subprocess.h"

namespace pacebench {
namespace {

using nlohmann::json;

constexpr double kDuplicateRateKbps = 0.5;

double CheckScore(double score, std::string_view what) {
  if (!std::isfinite(score) || score < 0.0 || score > 100.0) {
    throw Error(ErrorCode::kRange, std::string(what) + " " + std::to_string(score) +
                                       " outside [0, 100]");
  }
  return score;
}

double NumberOrSchemaError(const json& value, std::string_view what) {
  if (!value.is_number()) {
    throw Error(ErrorCode::kSchema, std::string(what) + " is not a number");
  }
  return value.get<double>();
}

}  // namespace

QualityReport ParseMetricReportJson(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kSchema, std::string("metric report is not JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kSchema, "metric report must be an object");

  QualityReport report;
  report.metric_name = doc.value("metric", std::string("vmaf"));

  std::optional<double> pooled;
  if (doc.contains("pooled") && !doc["pooled"].is_null()) {
    pooled = NumberOrSchemaError(doc["pooled"], "pooled");
  } else if (doc.contains("pooled_metrics")) {
    const json& pm = doc["pooled_metrics"];
    if (pm.contains(report.metric_name) && pm[report.metric_name].contains("mean")) {
      pooled = NumberOrSchemaError(pm[report.metric_name]["mean"], "pooled mean");
    }
  }

  if (doc.contains("frames") && !doc["frames"].is_null()) {
    const json& frames = doc["frames"];
    if (!frames.is_array()) throw Error(ErrorCode::kSchema, "frames must be an array");
    for (const json& f : frames) {
      if (f.is_number()) {
        report.per_frame_scores.push_back(f.get<double>());
      } else if (f.is_object() && f.contains("metrics") &&
                 f["metrics"].contains(report.metric_name)) {
        report.per_frame_scores.push_back(
            NumberOrSchemaError(f["metrics"][report.metric_name], "frame score"));
      } else {
        throw Error(ErrorCode::kSchema,
                    "frame entry without a " + report.metric_name + " score");
      }
    }
  }

  if (!pooled && report.per_frame_scores.empty()) {
    throw Error(ErrorCode::kSchema, "metric report has neither pooled nor frame scores");
  }
  for (double s : report.per_frame_scores) CheckScore(s, "frame score");

  if (!report.per_frame_scores.empty()) {
    const double mean = std::accumulate(report.per_frame_scores.begin(),
                                        report.per_frame_scores.end(), 0.0) /
                        static_cast<double>(report.per_frame_scores.size());
    if (pooled && std::abs(*pooled - mean) > 1e-6) {
      spdlog::warn("pooled {} score {} differs from frame mean {}", report.metric_name,
                   *pooled, mean);
    }
    if (!pooled) pooled = mean;
  }
  report.pooled_score = CheckScore(*pooled, "pooled score");
  return report;
}

QualityReport ParseMetricReport(const std::filesystem::path& path) {
  try {
    return ParseMetricReportJson(ReadFileToString(path));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string MetricReportToJson(const QualityReport& report) {
  json doc = {{"metric", report.metric_name}, {"pooled", report.pooled_score}};
  if (!report.per_frame_scores.empty()) doc["frames"] = report.per_frame_scores;
  return doc.dump() + "\n";
}

std::string_view MosLabelName(MosLabel label) {
  switch (label) {
    case MosLabel::kBad: return "bad";
    case MosLabel::kPoor: return "poor";
    case MosLabel::kFair: return "fair";
    case MosLabel::kGood: return "good";
    case MosLabel::kExcellent: return "excellent";
  }
  return "unknown";
}

MosScore VmafToMos(double vmaf) {
  CheckScore(vmaf, "VMAF score");
  MosScore score;
  score.mos_value = std::clamp(vmaf / 20.0, 1.0, 5.0);
  const int anchor = std::clamp(static_cast<int>(std::floor(score.mos_value + 0.5)), 1, 5);
  score.label = static_cast<MosLabel>(anchor - 1);
  return score;
}

RateQualityCurve CollectCurve(std::vector<CurveSample> samples, std::string label) {
  if (samples.size() < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "curve '" + label + "' needs at least 2 runs with quality, got " +
                    std::to_string(samples.size()));
  }
  std::sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) {
    return a.achieved_kbps < b.achieved_kbps;
  });
  RateQualityCurve curve;
  curve.label = std::move(label);
  for (const auto& s : samples) {
    if (!curve.points.empty() &&
        s.achieved_kbps - curve.points.back().rate_kbps < kDuplicateRateKbps) {
      throw Error(ErrorCode::kDuplicatePoint,
                  "curve '" + curve.label + "' has two points near " +
                      std::to_string(s.achieved_kbps) + " kbps");
    }
    curve.points.push_back({s.achieved_kbps, CheckScore(s.pooled_quality, "quality")});
  }
  return curve;
}

QualityReport RunMetricTool(const MetricTool& tool, const VideoSequence& reference,
                            const std::filesystem::path& distorted,
                            const std::filesystem::path& report_out) {
  const TemplateVars vars = {
      {"reference", reference.path.string()},
      {"distorted", distorted.string()},
      {"width", std::to_string(reference.width)},
      {"height", std::to_string(reference.height)},
      {"fps", reference.fps.ToString()},
      {"report_out", report_out.string()},
  };
  const auto argv = RenderTemplate(tool.command_template, vars);
  if (report_out.has_parent_path()) {
    std::filesystem::create_directories(report_out.parent_path());
  }
  SpawnOptions options;
  options.pipe_stdin = false;
  ChildProcess child = ChildProcess::Spawn(argv, options);
  const int status = child.Wait();
  if (status != 0) {
    throw Error(ErrorCode::kProcess, "metric tool exited with status " +
                                         std::to_string(status) + ": " +
                                         child.stderr_text().substr(0, 512));
  }
  return ParseMetricReport(report_out);
}

}  // namespace pacebench
