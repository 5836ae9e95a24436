#ifndef PACEBENCH_CURVE_H_
#define PACEBENCH_CURVE_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pacebench {

struct RatePoint {
  double rate_kbps = 0.0;
  double quality = 0.0;

  friend bool operator==(const RatePoint&, const RatePoint&) = default;
};

// Rate-quality samples for one encoder on one sequence, ascending in rate.
struct RateQualityCurve {
  std::vector<RatePoint> points;
  std::string label;

  double min_rate() const { return points.front().rate_kbps; }
  double max_rate() const { return points.back().rate_kbps; }
  double min_quality() const;
  double max_quality() const;
};

// CSV with header "bitrate_kbps,quality"; values at full precision.
std::string CurveToCsv(const RateQualityCurve& curve);
RateQualityCurve ParseCurveCsv(std::string_view text, std::string label);
RateQualityCurve LoadCurveCsv(const std::filesystem::path& path);

}  // namespace pacebench

#endif  // PACEBENCH_CURVE_H_
