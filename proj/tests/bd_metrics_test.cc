#include "pacebench/bd_metrics.h"

#include <gtest/gtest.h>

#include <cmath>

#include "bd_oracle.h"
#include "pacebench/error.h"

namespace pacebench {
namespace {

using testing::OracleBdQuality;
using testing::OracleBdRate;

RateQualityCurve Curve(std::vector<RatePoint> pts, std::string label = "c") {
  return {std::move(pts), std::move(label)};
}

// Eight points with an uneven, concave rate-quality shape.
RateQualityCurve Base() {
  return Curve({{800, 31.0},
                {1000, 36.5},
                {1250, 41.0},
                {1750, 47.2},
                {2500, 53.0},
                {4000, 60.1},
                {6500, 66.0},
                {10000, 70.4}},
               "base");
}

RateQualityCurve ScaleRates(const RateQualityCurve& c, double k) {
  RateQualityCurve out = c;
  for (auto& p : out.points) p.rate_kbps *= k;
  return out;
}

RateQualityCurve ShiftQuality(const RateQualityCurve& c, double d) {
  RateQualityCurve out = c;
  for (auto& p : out.points) p.quality += d;
  return out;
}

TEST(PruneMonotone, DropsDominatedPoints) {
  const auto r = PruneMonotone(Curve({{1, 10}, {2, 20}, {3, 15}, {4, 25}}));
  EXPECT_EQ(r.curve.points, (std::vector<RatePoint>{{1, 10}, {2, 20}, {4, 25}}));
  ASSERT_EQ(r.dropped.size(), 1u);
  EXPECT_EQ(r.dropped[0], (RatePoint{3, 15}));
}

TEST(PruneMonotone, IdentityAndDegenerate) {
  EXPECT_EQ(PruneMonotone(Base()).curve.points, Base().points);
  EXPECT_TRUE(PruneMonotone(Base()).dropped.empty());
  try {
    PruneMonotone(Curve({{1, 20}, {2, 10}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateCurve);
  }
}

TEST(CommonRange, WorkedExample) {
  const auto a = Curve({{2160, 27}, {9925, 61}}, "aomenc-rt8");
  const auto b = Curve({{810, 6}, {10000, 55}}, "x264");
  const CommonRange q = FindCommonRange(a, b, Axis::kQuality);
  EXPECT_EQ(q.lo, 27);
  EXPECT_EQ(q.hi, 55);
  const CommonRange r = FindCommonRange(a, b, Axis::kRate);
  EXPECT_EQ(r.lo, 2160);
  EXPECT_EQ(r.hi, 9925);
}

TEST(CommonRange, DisjointIsNoOverlap) {
  try {
    FindCommonRange(Curve({{1, 0}, {2, 1}}), Curve({{3, 2}, {4, 3}}), Axis::kQuality);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoOverlap);
    EXPECT_NE(std::string(e.what()).find("no common quality range"), std::string::npos);
  }
}

TEST(BdRate, SelfDeltaIsZero) {
  for (auto m : {BdRateMethod::kPaperArea, BdRateMethod::kLogDomain}) {
    EXPECT_NEAR(BdRate(Base(), Base(), m).value, 0.0, 1e-9);
  }
  for (auto d : {RateDomain::kLinear, RateDomain::kLog}) {
    EXPECT_NEAR(BdQuality(Base(), Base(), d).value, 0.0, 1e-9);
  }
}

TEST(BdRate, ConstantRatio) {
  for (double c : {0.5, 0.8, 1.25, 2.0}) {
    for (auto m : {BdRateMethod::kPaperArea, BdRateMethod::kLogDomain}) {
      const BdResult r = BdRate(ScaleRates(Base(), c), Base(), m);
      EXPECT_NEAR(r.value, 100.0 * (c - 1.0), 1e-6) << c;
      EXPECT_GE(r.panels, 2048);
    }
  }
}

TEST(BdQuality, ConstantOffset) {
  for (auto d : {RateDomain::kLinear, RateDomain::kLog}) {
    EXPECT_NEAR(BdQuality(ShiftQuality(Base(), 5.0), Base(), d).value, 5.0, 1e-6);
    EXPECT_NEAR(BdQuality(Base(), ShiftQuality(Base(), 5.0), d).value, -5.0, 1e-6);
  }
}

TEST(BdRate, TwoPointClosedForm) {
  // With two points log10 R is linear in q, so R = 10^(a + b q) and the
  // areas have closed forms.
  const auto test = Curve({{1000, 40}, {3000, 70}});
  const auto ref = Curve({{1500, 30}, {4000, 60}});
  auto line = [](double r0, double q0, double r1, double q1) {
    const double b = (std::log10(r1) - std::log10(r0)) / (q1 - q0);
    return std::pair{std::log10(r0) - b * q0, b};
  };
  auto area = [](std::pair<double, double> ab, double lo, double hi) {
    const auto [a, b] = ab;
    return (std::pow(10.0, a + b * hi) - std::pow(10.0, a + b * lo)) / (b * std::log(10.0));
  };
  const auto lt = line(1000, 40, 3000, 70);
  const auto lr = line(1500, 30, 4000, 60);
  const double at = area(lt, 40, 60), ar = area(lr, 40, 60);
  EXPECT_NEAR(BdRate(test, ref, BdRateMethod::kPaperArea).value, 100.0 * (at - ar) / ar, 1e-9);

  // Mean log difference of two lines is their difference at the midpoint.
  const double dmid = (lt.first + lt.second * 50) - (lr.first + lr.second * 50);
  EXPECT_NEAR(BdRate(test, ref, BdRateMethod::kLogDomain).value,
              100.0 * (std::pow(10.0, dmid) - 1.0), 1e-9);
}

TEST(BdRate, MatchesDenseTrapezoidOracle) {
  const auto ref = Base();
  auto test = Curve({{700, 33.0},
                     {950, 38.0},
                     {1300, 44.5},
                     {1600, 47.0},
                     {2600, 55.5},
                     {3900, 61.0},
                     {7000, 68.2},
                     {9000, 69.0}},
                    "test");
  for (auto m : {BdRateMethod::kPaperArea, BdRateMethod::kLogDomain}) {
    EXPECT_NEAR(BdRate(test, ref, m).value, OracleBdRate(test, ref, m), 1e-6);
  }
  for (auto d : {RateDomain::kLinear, RateDomain::kLog}) {
    EXPECT_NEAR(BdQuality(test, ref, d).value, OracleBdQuality(test, ref, d), 1e-6);
  }
}

TEST(BdRate, SignFollowsDominance) {
  const auto worse = ScaleRates(Base(), 1.3);  // more bitrate for every quality
  EXPECT_LT(BdRate(Base(), worse).value, 0.0);
  EXPECT_GT(BdRate(worse, Base()).value, 0.0);
  EXPECT_GT(BdQuality(Base(), worse, RateDomain::kLinear).value, 0.0);
  EXPECT_LT(BdQuality(worse, Base(), RateDomain::kLinear).value, 0.0);
}

TEST(BdRate, RateUnitInvariance) {
  const auto test = ShiftQuality(ScaleRates(Base(), 0.9), 1.0);
  for (double k : {1e-3, 8.0, 1000.0}) {
    for (auto m : {BdRateMethod::kPaperArea, BdRateMethod::kLogDomain}) {
      EXPECT_NEAR(BdRate(ScaleRates(test, k), ScaleRates(Base(), k), m).value,
                  BdRate(test, Base(), m).value, 1e-9);
    }
    EXPECT_NEAR(BdQuality(ScaleRates(test, k), ScaleRates(Base(), k), RateDomain::kLog).value,
                BdQuality(test, Base(), RateDomain::kLog).value, 1e-9);
  }
}

TEST(BdRate, ReportsRangeAndPoints) {
  const auto test = Curve({{900, 35}, {2000, 50}, {5000, 65}});
  const BdResult r = BdRate(test, Base());
  EXPECT_EQ(r.kind, BdKind::kRatePercent);
  EXPECT_EQ(r.common_range.axis, Axis::kQuality);
  EXPECT_EQ(r.common_range.lo, 35);
  EXPECT_EQ(r.common_range.hi, 65);
  EXPECT_EQ(r.points_used, (std::pair<size_t, size_t>{3, 8}));
  const BdResult q = BdQuality(test, Base(), RateDomain::kLinear);
  EXPECT_EQ(q.common_range.axis, Axis::kRate);
  EXPECT_EQ(q.common_range.lo, 900);
  EXPECT_EQ(q.common_range.hi, 5000);
}

TEST(BdRate, RejectsUnprunedCurves) {
  const auto bumpy = Curve({{1, 10}, {2, 20}, {3, 15}, {4, 25}});
  try {
    BdRate(bumpy, Base());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateCurve);
  }
}

TEST(BdRate, NoOverlapPropagates) {
  const auto high = Curve({{800, 80}, {1600, 90}});
  try {
    BdRate(high, Base());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoOverlap);
  }
}

TEST(Quadrature, HalvingStepIsStable) {
  const auto test = ShiftQuality(ScaleRates(Base(), 0.85), 0.7);
  QuadratureOptions coarse;
  coarse.refine = false;
  QuadratureOptions fine = coarse;
  fine.min_panels = coarse.min_panels * 2;
  EXPECT_NEAR(BdRate(test, Base(), BdRateMethod::kPaperArea, coarse).value,
              BdRate(test, Base(), BdRateMethod::kPaperArea, fine).value, 1e-7);
  EXPECT_NEAR(BdQuality(test, Base(), RateDomain::kLinear, coarse).value,
              BdQuality(test, Base(), RateDomain::kLinear, fine).value, 1e-7);
}

}  // namespace
}  // namespace pacebench
