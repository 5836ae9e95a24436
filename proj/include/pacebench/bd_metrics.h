#ifndef PACEBENCH_BD_METRICS_H_
#define PACEBENCH_BD_METRICS_H_

#include <string_view>
#include <utility>
#include <vector>

#include "pacebench/curve.h"
#include "pacebench/monotone_cubic.h"

namespace pacebench {

enum class Axis { kQuality, kRate };
enum class BdKind { kRatePercent, kQualityPoints };
// How BD-rate turns two R(q) curves into a percentage.
//   kPaperArea: 100 * (area(test) - area(ref)) / area(ref) with linear rates.
//   kLogDomain: 100 * (10^mean(log10 R_test - log10 R_ref) - 1).
enum class BdRateMethod { kPaperArea, kLogDomain };
// Abscissa used when integrating quality over rate.
enum class RateDomain { kLinear, kLog };

std::string_view AxisName(Axis axis);
std::string_view BdKindName(BdKind kind);
std::string_view BdRateMethodName(BdRateMethod method);
std::string_view RateDomainName(RateDomain domain);

struct CommonRange {
  double lo = 0.0;
  double hi = 0.0;
  Axis axis = Axis::kQuality;
};

struct PruneResult {
  RateQualityCurve curve;
  std::vector<RatePoint> dropped;
};

// Keeps the Pareto points: scanning by ascending rate, any point whose
// quality does not beat every cheaper point is dropped (and logged). Throws
// kDegenerateCurve when fewer than two points survive.
PruneResult PruneMonotone(const RateQualityCurve& curve);

// Throws kDegenerateCurve unless both axes are strictly increasing and all
// rates are positive.
void CheckMonotone(const RateQualityCurve& curve);

// Overlap [max(lo_a, lo_b), min(hi_a, hi_b)] on |axis|. Throws kNoOverlap
// when the overlap is empty or a single point.
CommonRange FindCommonRange(const RateQualityCurve& a, const RateQualityCurve& b,
                            Axis axis);

// R(q): interpolates log10(rate) over quality and exponentiates.
MonotoneCubic RateOverQuality(const RateQualityCurve& curve);
// Q(u): interpolates quality over u = rate or u = log10(rate).
MonotoneCubic QualityOverRate(const RateQualityCurve& curve, RateDomain domain);

// Evaluates the curve on the other axis. For |axis_in| == kQuality returns a
// rate in kbps; for kRate returns a quality, |x| always given in kbps.
// Throws kExtrapolation outside the curve's range.
double Interpolate(const RateQualityCurve& curve, Axis axis_in, double x,
                   RateDomain domain = RateDomain::kLinear);

struct QuadratureOptions {
  int min_panels = 2048;
  int max_panels = 1 << 20;
  // Keep doubling the panel count until the BD value moves less than this.
  double tolerance = 1e-10;
  // When false, evaluate once at min_panels.
  bool refine = true;
};

struct BdResult {
  BdKind kind = BdKind::kRatePercent;
  double value = 0.0;
  CommonRange common_range;
  BdRateMethod method = BdRateMethod::kPaperArea;  // BD-rate only
  RateDomain rate_domain = RateDomain::kLinear;    // BD-quality only
  std::pair<size_t, size_t> points_used;           // (test, ref)
  int panels = 0;
};

// Average bitrate difference of |test| against |ref| at equal quality, in
// percent; negative means |test| needs less bitrate. Curves must already be
// monotone (see PruneMonotone).
BdResult BdRate(const RateQualityCurve& test, const RateQualityCurve& ref,
                BdRateMethod method = BdRateMethod::kPaperArea,
                const QuadratureOptions& quadrature = {});

// Average quality difference test - ref at equal bitrate, in score points.
BdResult BdQuality(const RateQualityCurve& test, const RateQualityCurve& ref,
                   RateDomain domain = RateDomain::kLinear,
                   const QuadratureOptions& quadrature = {});

}  // namespace pacebench

#endif  // PACEBENCH_BD_METRICS_H_
