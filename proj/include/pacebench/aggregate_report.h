#ifndef PACEBENCH_AGGREGATE_REPORT_H_
#define PACEBENCH_AGGREGATE_REPORT_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pacebench/bd_metrics.h"
#include "pacebench/curve.h"
#include "pacebench/dataset.h"
#include "pacebench/frame_rate.h"

namespace pacebench {

// Arithmetic mean. Throws kEmptyGroup for an empty list.
double GroupAverage(std::span<const double> values);

// Sequences sharing a frame rate, with one average per competitor.
struct MatrixGroup {
  FrameRate fps;
  std::vector<std::string> rows;                  // sequence short names
  std::vector<std::vector<std::optional<double>>> cells;  // [row][column]
  std::vector<std::optional<double>> averages;    // [column]

  std::string average_label() const { return "Avg " + fps.ToString(); }
};

// BD values of the anchor (as test) against each competitor (as reference),
// one row per sequence, grouped by frame rate in ascending order.
struct ComparisonMatrix {
  std::string anchor;
  BdKind kind = BdKind::kRatePercent;
  std::vector<std::string> columns;
  std::vector<MatrixGroup> groups;
};

// Averages a column of a group only when every cell in it is defined.
void FillGroupAverages(ComparisonMatrix& matrix);

using CurveKey = std::pair<std::string, std::string>;  // (profile, sequence)

struct MatrixOptions {
  BdRateMethod method = BdRateMethod::kPaperArea;
  RateDomain rate_domain = RateDomain::kLinear;
};

// |profiles| fixes the column order (anchor excluded automatically);
// |sequences| fixes row order within each frame-rate group. Missing curves,
// curves that fail pruning and pairs without overlap give undefined cells.
// Throws kConfig when the anchor is not among |profiles|.
ComparisonMatrix BuildMatrix(const std::map<CurveKey, RateQualityCurve>& curves,
                             std::span<const VideoSequence> sequences,
                             std::span<const std::string> profiles,
                             std::string_view anchor, BdKind kind,
                             const MatrixOptions& options = {});

struct Ranking {
  std::vector<std::string> order;  // descending by value
  std::vector<std::string> warnings;
};

// Orders profiles by their group average, descending, with the anchor
// inserted at |anchor_value| (0 for BD deltas against the anchor). Ties
// break lexicographically and produce a warning. Throws kRankingUnavailable
// naming the first profile without a value.
Ranking RankProfiles(const std::vector<std::pair<std::string, std::optional<double>>>& averages,
                     std::string_view anchor, double anchor_value = 0.0);

// Markdown: two decimals, U+2212 minus sign, em dash for undefined cells.
std::string RenderMarkdown(const ComparisonMatrix& matrix);
// CSV: full precision, empty field for undefined cells.
std::string RenderCsv(const ComparisonMatrix& matrix);
ComparisonMatrix ParseMatrixCsv(std::string_view text, std::string anchor, BdKind kind);

}  // namespace pacebench

#endif  // PACEBENCH_AGGREGATE_REPORT_H_
