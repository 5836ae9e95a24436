#include "pacebench/aggregate_report.h"

#include <algorithm>
#include <numeric>
#include <set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "csv.h"
#include "pacebench/error.h"

namespace pacebench {
namespace {

constexpr std::string_view kUndefinedMarkdown = "—";
constexpr std::string_view kMinusSign = "−";

std::string FormatMarkdownCell(const std::optional<double>& value) {
  if (!value) return std::string(kUndefinedMarkdown);
  std::string text = fmt::format("{:.2f}", *value);
  if (text == "-0.00") return "0.00";
  if (text.front() == '-') return std::string(kMinusSign) + text.substr(1);
  return text;
}

std::string FormatCsvCell(const std::optional<double>& value) {
  return value ? csv::FormatDouble(*value) : std::string();
}

std::optional<double> ComputeCell(const std::map<CurveKey, RateQualityCurve>& curves,
                                  const std::string& anchor, const std::string& competitor,
                                  const std::string& seq, BdKind kind,
                                  const MatrixOptions& options) {
  const auto anchor_it = curves.find({anchor, seq});
  const auto comp_it = curves.find({competitor, seq});
  if (anchor_it == curves.end() || comp_it == curves.end()) {
    spdlog::warn("{} vs {} on {}: missing curve, cell undefined", anchor, competitor, seq);
    return std::nullopt;
  }
  try {
    const RateQualityCurve test = PruneMonotone(anchor_it->second).curve;
    const RateQualityCurve ref = PruneMonotone(comp_it->second).curve;
    const BdResult result = kind == BdKind::kRatePercent
                                ? BdRate(test, ref, options.method)
                                : BdQuality(test, ref, options.rate_domain);
    return result.value;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoOverlap && e.code() != ErrorCode::kDegenerateCurve) throw;
    spdlog::warn("{} vs {} on {}: {}, cell undefined", anchor, competitor, seq, e.what());
    return std::nullopt;
  }
}

}  // namespace

double GroupAverage(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyGroup, "cannot average an empty group");
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

void FillGroupAverages(ComparisonMatrix& matrix) {
  for (auto& group : matrix.groups) {
    group.averages.assign(matrix.columns.size(), std::nullopt);
    if (group.rows.empty()) continue;
    for (size_t c = 0; c < matrix.columns.size(); ++c) {
      std::vector<double> values;
      bool complete = true;
      for (const auto& row : group.cells) {
        if (!row[c]) {
          complete = false;
          break;
        }
        values.push_back(*row[c]);
      }
      if (complete) group.averages[c] = GroupAverage(values);
    }
  }
}

ComparisonMatrix BuildMatrix(const std::map<CurveKey, RateQualityCurve>& curves,
                             std::span<const VideoSequence> sequences,
                             std::span<const std::string> profiles,
                             std::string_view anchor, BdKind kind,
                             const MatrixOptions& options) {
  if (std::find(profiles.begin(), profiles.end(), anchor) == profiles.end()) {
    throw Error(ErrorCode::kConfig, "anchor profile '" + std::string(anchor) +
                                        "' is not among the profiles");
  }
  ComparisonMatrix matrix;
  matrix.anchor = std::string(anchor);
  matrix.kind = kind;
  for (const auto& p : profiles) {
    if (p != anchor) matrix.columns.push_back(p);
  }

  std::vector<FrameRate> rates;
  for (const auto& seq : sequences) {
    if (std::find(rates.begin(), rates.end(), seq.fps) == rates.end()) {
      rates.push_back(seq.fps);
    }
  }
  std::stable_sort(rates.begin(), rates.end(), [](const FrameRate& a, const FrameRate& b) {
    return a.num * b.den < b.num * a.den;
  });

  for (const auto& rate : rates) {
    MatrixGroup group;
    group.fps = rate;
    for (const auto& seq : sequences) {
      if (!(seq.fps == rate)) continue;
      group.rows.push_back(seq.short_name);
      std::vector<std::optional<double>> row;
      for (const auto& competitor : matrix.columns) {
        row.push_back(
            ComputeCell(curves, matrix.anchor, competitor, seq.short_name, kind, options));
      }
      group.cells.push_back(std::move(row));
    }
    matrix.groups.push_back(std::move(group));
  }
  FillGroupAverages(matrix);
  return matrix;
}

Ranking RankProfiles(
    const std::vector<std::pair<std::string, std::optional<double>>>& averages,
    std::string_view anchor, double anchor_value) {
  std::vector<std::pair<std::string, double>> entries;
  entries.emplace_back(std::string(anchor), anchor_value);
  for (const auto& [name, value] : averages) {
    if (name == anchor) continue;
    if (!value) {
      throw Error(ErrorCode::kRankingUnavailable,
                  "no average for profile '" + name + "', ranking unavailable");
    }
    entries.emplace_back(name, *value);
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Ranking ranking;
  for (size_t i = 0; i < entries.size(); ++i) {
    ranking.order.push_back(entries[i].first);
    if (i > 0 && entries[i].second == entries[i - 1].second) {
      ranking.warnings.push_back("tie between '" + entries[i - 1].first + "' and '" +
                                 entries[i].first + "' broken by name");
      spdlog::warn("{}", ranking.warnings.back());
    }
  }
  return ranking;
}

std::string RenderMarkdown(const ComparisonMatrix& matrix) {
  std::string out = "| Video |";
  std::string rule = "|---|";
  for (const auto& col : matrix.columns) {
    out += " " + col + " |";
    rule += "---:|";
  }
  out += "\n" + rule + "\n";
  auto emit = [&out](const std::string& label,
                     const std::vector<std::optional<double>>& values) {
    out += "| " + label + " |";
    for (const auto& v : values) out += " " + FormatMarkdownCell(v) + " |";
    out += "\n";
  };
  for (const auto& group : matrix.groups) {
    for (size_t r = 0; r < group.rows.size(); ++r) emit(group.rows[r], group.cells[r]);
    std::vector<std::optional<double>> averages = group.averages;
    averages.resize(matrix.columns.size());
    emit(group.average_label(), averages);
  }
  return out;
}

std::string RenderCsv(const ComparisonMatrix& matrix) {
  std::vector<std::string> header = {"video"};
  header.insert(header.end(), matrix.columns.begin(), matrix.columns.end());
  std::string out = csv::JoinRow(header);
  auto emit = [&out](const std::string& label,
                     const std::vector<std::optional<double>>& values) {
    std::vector<std::string> fields = {label};
    for (const auto& v : values) fields.push_back(FormatCsvCell(v));
    out += csv::JoinRow(fields);
  };
  for (const auto& group : matrix.groups) {
    for (size_t r = 0; r < group.rows.size(); ++r) emit(group.rows[r], group.cells[r]);
    std::vector<std::optional<double>> averages = group.averages;
    averages.resize(matrix.columns.size());
    emit(group.average_label(), averages);
  }
  return out;
}

ComparisonMatrix ParseMatrixCsv(std::string_view text, std::string anchor, BdKind kind) {
  const auto rows = csv::ParseRows(text);
  if (rows.empty() || rows[0].empty() || rows[0][0] != "video") {
    throw Error(ErrorCode::kParse, "matrix CSV must start with a 'video' header");
  }
  ComparisonMatrix matrix;
  matrix.anchor = std::move(anchor);
  matrix.kind = kind;
  matrix.columns.assign(rows[0].begin() + 1, rows[0].end());

  MatrixGroup pending;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != matrix.columns.size() + 1) {
      throw Error(ErrorCode::kParse, "matrix CSV row " + std::to_string(i) +
                                         " has the wrong number of fields");
    }
    std::vector<std::optional<double>> values;
    for (size_t c = 1; c < row.size(); ++c) {
      if (row[c].empty()) {
        values.push_back(std::nullopt);
      } else {
        values.push_back(csv::ParseDouble(row[c], "matrix CSV"));
      }
    }
    if (row[0].rfind("Avg ", 0) == 0) {
      pending.fps = FrameRate::Parse(std::string_view(row[0]).substr(4));
      pending.averages = std::move(values);
      matrix.groups.push_back(std::move(pending));
      pending = MatrixGroup{};
    } else {
      pending.rows.push_back(row[0]);
      pending.cells.push_back(std::move(values));
    }
  }
  if (!pending.rows.empty()) {
    throw Error(ErrorCode::kParse, "matrix CSV ends without an average row");
  }
  return matrix;
}

}  // namespace pacebench
