#include "pacebench/curve.h"

#include <algorithm>

#include "csv.h"
#include "pacebench/atomic_file.h"
#include "pacebench/error.h"

namespace pacebench {

double RateQualityCurve::min_quality() const {
  return std::min_element(points.begin(), points.end(),
                          [](const RatePoint& a, const RatePoint& b) {
                            return a.quality < b.quality;
                          })
      ->quality;
}

double RateQualityCurve::max_quality() const {
  return std::max_element(points.begin(), points.end(),
                          [](const RatePoint& a, const RatePoint& b) {
                            return a.quality < b.quality;
                          })
      ->quality;
}

std::string CurveToCsv(const RateQualityCurve& curve) {
  std::string out = "bitrate_kbps,quality\n";
  for (const auto& p : curve.points) {
    out += csv::FormatDouble(p.rate_kbps) + "," + csv::FormatDouble(p.quality) + "\n";
  }
  return out;
}

RateQualityCurve ParseCurveCsv(std::string_view text, std::string label) {
  const auto rows = csv::ParseRows(text);
  if (rows.empty() || rows[0].size() != 2 || rows[0][0] != "bitrate_kbps" ||
      rows[0][1] != "quality") {
    throw Error(ErrorCode::kParse,
                "curve '" + label + "' must start with header bitrate_kbps,quality");
  }
  RateQualityCurve curve;
  curve.label = std::move(label);
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 2) {
      throw Error(ErrorCode::kParse, "curve '" + curve.label + "' row " +
                                         std::to_string(i) + " needs 2 fields");
    }
    curve.points.push_back({csv::ParseDouble(rows[i][0], "curve " + curve.label),
                            csv::ParseDouble(rows[i][1], "curve " + curve.label)});
  }
  return curve;
}

RateQualityCurve LoadCurveCsv(const std::filesystem::path& path) {
  return ParseCurveCsv(ReadFileToString(path), path.stem().string());
}

}  // namespace pacebench
