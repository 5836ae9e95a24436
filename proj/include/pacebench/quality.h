#ifndef PACEBENCH_QUALITY_H_
#define PACEBENCH_QUALITY_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pacebench/command_template.h"
#include "pacebench/curve.h"
#include "pacebench/dataset.h"

namespace pacebench {

struct QualityReport {
  std::string metric_name = "vmaf";
  std::vector<double> per_frame_scores;
  double pooled_score = 0.0;
};

// Accepts {"metric", "pooled"?, "frames"?} where frames are numbers, and the
// libvmaf log layout ({"pooled_metrics": {"vmaf": {"mean": x}}, "frames":
// [{"metrics": {"vmaf": x}}]}). The pooled score is the tool's own value
// when present, else the mean of the frame scores. Throws kSchema / kRange.
QualityReport ParseMetricReportJson(std::string_view json_text);
QualityReport ParseMetricReport(const std::filesystem::path& path);
std::string MetricReportToJson(const QualityReport& report);

enum class MosLabel { kBad, kPoor, kFair, kGood, kExcellent };
std::string_view MosLabelName(MosLabel label);

struct MosScore {
  double mos_value = 1.0;
  MosLabel label = MosLabel::kBad;
};

// VMAF 20/40/60/80/100 map to MOS 1..5 (bad..excellent), linear in between
// and clamped to [1, 5]. The label is the anchor nearest to the MOS value,
// halves rounding up. Throws kRange outside [0, 100].
MosScore VmafToMos(double vmaf);

struct CurveSample {
  double achieved_kbps = 0.0;
  double pooled_quality = 0.0;
};

// Builds a curve keyed by achieved bitrate, sorted ascending. Samples closer
// than 0.5 kbps are duplicates (kDuplicatePoint); fewer than two samples is
// kInsufficientData.
RateQualityCurve CollectCurve(std::vector<CurveSample> samples, std::string label);

// An external quality tool. Placeholders: {reference}, {distorted},
// {width}, {height}, {fps}, {report_out}.
struct MetricTool {
  std::vector<std::string> command_template;
};

// Runs the tool for one encoded stream and parses the report it writes.
// Throws Error(kProcess) when the tool fails.
QualityReport RunMetricTool(const MetricTool& tool, const VideoSequence& reference,
                            const std::filesystem::path& distorted,
                            const std::filesystem::path& report_out);

}  // namespace pacebench

#endif  // PACEBENCH_QUALITY_H_
