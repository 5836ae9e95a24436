#include "pacebench/bd_metrics.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include <spdlog/spdlog.h>

#include "pacebench/error.h"

namespace pacebench {
namespace {

using Integrand = std::function<double(double)>;

// Composite Simpson over [lo, hi] with the panels split at |breaks| so that
// no panel straddles a knot of either interpolant; inside each knot interval
// the panels are uniform. Roughly |panels| panels in total.
double Simpson(const Integrand& f, double lo, double hi, std::vector<double> breaks,
               int panels) {
  breaks.push_back(lo);
  breaks.push_back(hi);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::remove_if(breaks.begin(), breaks.end(),
                              [&](double b) { return b < lo || b > hi; }),
               breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  const double length = hi - lo;
  double total = 0.0;
  for (size_t s = 0; s + 1 < breaks.size(); ++s) {
    const double a = breaks[s];
    const double b = breaks[s + 1];
    int n = static_cast<int>(std::ceil(panels * (b - a) / length / 2.0)) * 2;
    n = std::max(n, 2);
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
      sum += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
    }
    total += sum * h / 3.0;
  }
  return total;
}

std::vector<double> MergedKnots(const MonotoneCubic& a, const MonotoneCubic& b) {
  std::vector<double> out(a.knots().begin(), a.knots().end());
  out.insert(out.end(), b.knots().begin(), b.knots().end());
  return out;
}

// Evaluates |compute| at increasing panel counts until it settles.
std::pair<double, int> Refine(const std::function<double(int)>& compute,
                              const QuadratureOptions& options) {
  int panels = std::max(options.min_panels, 2);
  double value = compute(panels);
  if (!options.refine) return {value, panels};
  while (panels * 2 <= options.max_panels) {
    const double next = compute(panels * 2);
    panels *= 2;
    const double change = std::abs(next - value);
    value = next;
    if (change < options.tolerance) break;
  }
  return {value, panels};
}

void LogDropped(const RateQualityCurve& curve, const std::vector<RatePoint>& dropped) {
  if (dropped.empty()) return;
  std::string list;
  for (const auto& p : dropped) {
    if (!list.empty()) list += ", ";
    list += "(" + std::to_string(p.rate_kbps) + " kbps, " + std::to_string(p.quality) + ")";
  }
  spdlog::warn("curve '{}': pruned {} non-monotone point(s): {}", curve.label,
               dropped.size(), list);
}

}  // namespace

std::string_view AxisName(Axis axis) {
  return axis == Axis::kQuality ? "quality" : "rate";
}

std::string_view BdKindName(BdKind kind) {
  return kind == BdKind::kRatePercent ? "bd_rate_percent" : "bd_quality_points";
}

std::string_view BdRateMethodName(BdRateMethod method) {
  return method == BdRateMethod::kPaperArea ? "paper-area" : "log-domain";
}

std::string_view RateDomainName(RateDomain domain) {
  return domain == RateDomain::kLinear ? "linear" : "log";
}

PruneResult PruneMonotone(const RateQualityCurve& curve) {
  if (curve.points.size() < 2) {
    throw Error(ErrorCode::kDegenerateCurve,
                "curve '" + curve.label + "' has fewer than 2 points");
  }
  PruneResult result;
  result.curve.label = curve.label;
  for (size_t i = 0; i < curve.points.size(); ++i) {
    const RatePoint& p = curve.points[i];
    if (i > 0 && !(p.rate_kbps > curve.points[i - 1].rate_kbps)) {
      throw Error(ErrorCode::kDegenerateCurve,
                  "curve '" + curve.label + "' rates are not strictly increasing");
    }
    if (!result.curve.points.empty() && p.quality <= result.curve.points.back().quality) {
      result.dropped.push_back(p);
    } else {
      result.curve.points.push_back(p);
    }
  }
  LogDropped(curve, result.dropped);
  if (result.curve.points.size() < 2) {
    throw Error(ErrorCode::kDegenerateCurve,
                "curve '" + curve.label + "' has fewer than 2 points after pruning");
  }
  return result;
}

void CheckMonotone(const RateQualityCurve& curve) {
  if (curve.points.size() < 2) {
    throw Error(ErrorCode::kDegenerateCurve,
                "curve '" + curve.label + "' has fewer than 2 points");
  }
  for (size_t i = 0; i < curve.points.size(); ++i) {
    const RatePoint& p = curve.points[i];
    if (!(p.rate_kbps > 0.0) || !std::isfinite(p.rate_kbps) || !std::isfinite(p.quality)) {
      throw Error(ErrorCode::kDegenerateCurve,
                  "curve '" + curve.label + "' has a non-positive or non-finite rate");
    }
    if (i == 0) continue;
    const RatePoint& q = curve.points[i - 1];
    if (!(p.rate_kbps > q.rate_kbps) || !(p.quality > q.quality)) {
      throw Error(ErrorCode::kDegenerateCurve,
                  "curve '" + curve.label + "' is not strictly increasing; prune it first");
    }
  }
}

CommonRange FindCommonRange(const RateQualityCurve& a, const RateQualityCurve& b,
                            Axis axis) {
  CommonRange range;
  range.axis = axis;
  if (axis == Axis::kQuality) {
    range.lo = std::max(a.min_quality(), b.min_quality());
    range.hi = std::min(a.max_quality(), b.max_quality());
  } else {
    range.lo = std::max(a.min_rate(), b.min_rate());
    range.hi = std::min(a.max_rate(), b.max_rate());
  }
  if (!(range.lo < range.hi)) {
    throw Error(ErrorCode::kNoOverlap,
                std::string("no common ") + std::string(AxisName(axis)) +
                    " range between '" + a.label + "' and '" + b.label + "'");
  }
  return range;
}

MonotoneCubic RateOverQuality(const RateQualityCurve& curve) {
  std::vector<double> qs, log_rates;
  for (const auto& p : curve.points) {
    qs.push_back(p.quality);
    log_rates.push_back(std::log10(p.rate_kbps));
  }
  return MonotoneCubic(std::move(qs), std::move(log_rates));
}

MonotoneCubic QualityOverRate(const RateQualityCurve& curve, RateDomain domain) {
  std::vector<double> us, qs;
  for (const auto& p : curve.points) {
    us.push_back(domain == RateDomain::kLog ? std::log10(p.rate_kbps) : p.rate_kbps);
    qs.push_back(p.quality);
  }
  return MonotoneCubic(std::move(us), std::move(qs));
}

double Interpolate(const RateQualityCurve& curve, Axis axis_in, double x,
                   RateDomain domain) {
  if (axis_in == Axis::kQuality) return std::pow(10.0, RateOverQuality(curve)(x));
  const double u = domain == RateDomain::kLog ? std::log10(x) : x;
  return QualityOverRate(curve, domain)(u);
}

BdResult BdRate(const RateQualityCurve& test, const RateQualityCurve& ref,
                BdRateMethod method, const QuadratureOptions& quadrature) {
  CheckMonotone(test);
  CheckMonotone(ref);
  BdResult result;
  result.kind = BdKind::kRatePercent;
  result.method = method;
  result.points_used = {test.points.size(), ref.points.size()};
  result.common_range = FindCommonRange(test, ref, Axis::kQuality);
  const double lo = result.common_range.lo;
  const double hi = result.common_range.hi;

  const MonotoneCubic log_rate_test = RateOverQuality(test);
  const MonotoneCubic log_rate_ref = RateOverQuality(ref);
  const std::vector<double> breaks = MergedKnots(log_rate_test, log_rate_ref);

  std::function<double(int)> compute;
  if (method == BdRateMethod::kPaperArea) {
    compute = [&](int panels) {
      const double area_test = Simpson(
          [&](double q) { return std::pow(10.0, log_rate_test(q)); }, lo, hi, breaks, panels);
      const double area_ref = Simpson(
          [&](double q) { return std::pow(10.0, log_rate_ref(q)); }, lo, hi, breaks, panels);
      return 100.0 * (area_test - area_ref) / area_ref;
    };
  } else {
    compute = [&](int panels) {
      const double diff = Simpson(
          [&](double q) { return log_rate_test(q) - log_rate_ref(q); }, lo, hi, breaks,
          panels);
      return 100.0 * (std::pow(10.0, diff / (hi - lo)) - 1.0);
    };
  }
  std::tie(result.value, result.panels) = Refine(compute, quadrature);
  return result;
}

BdResult BdQuality(const RateQualityCurve& test, const RateQualityCurve& ref,
                   RateDomain domain, const QuadratureOptions& quadrature) {
  CheckMonotone(test);
  CheckMonotone(ref);
  BdResult result;
  result.kind = BdKind::kQualityPoints;
  result.rate_domain = domain;
  result.points_used = {test.points.size(), ref.points.size()};
  result.common_range = FindCommonRange(test, ref, Axis::kRate);

  const bool log = domain == RateDomain::kLog;
  const double lo = log ? std::log10(result.common_range.lo) : result.common_range.lo;
  const double hi = log ? std::log10(result.common_range.hi) : result.common_range.hi;

  const MonotoneCubic quality_test = QualityOverRate(test, domain);
  const MonotoneCubic quality_ref = QualityOverRate(ref, domain);
  const std::vector<double> breaks = MergedKnots(quality_test, quality_ref);

  auto compute = [&](int panels) {
    const double diff = Simpson(
        [&](double u) { return quality_test(u) - quality_ref(u); }, lo, hi, breaks, panels);
    return diff / (hi - lo);
  };
  std::tie(result.value, result.panels) = Refine(compute, quadrature);
  return result;
}

}  // namespace pacebench
