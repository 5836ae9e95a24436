#include "pacebench/error.h"

namespace pacebench {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidGeometry: return "invalid_geometry";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kTruncated: return "truncated";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kInvalidRate: return "invalid_rate";
    case ErrorCode::kInvalidInput: return "invalid_input";
    case ErrorCode::kSinkClosed: return "sink_closed";
    case ErrorCode::kDeliveryAborted: return "delivery_aborted";
    case ErrorCode::kTemplate: return "template";
    case ErrorCode::kSpawn: return "spawn";
    case ErrorCode::kProcess: return "process";
    case ErrorCode::kEmptyGroup: return "empty_group";
    case ErrorCode::kSchema: return "schema";
    case ErrorCode::kRange: return "range";
    case ErrorCode::kDuplicatePoint: return "duplicate_point";
    case ErrorCode::kInsufficientData: return "insufficient_data";
    case ErrorCode::kDegenerateCurve: return "degenerate_curve";
    case ErrorCode::kNoOverlap: return "no_overlap";
    case ErrorCode::kExtrapolation: return "extrapolation";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kRankingUnavailable: return "ranking_unavailable";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kUsage: return "usage";
  }
  return "unknown";
}

int ExitStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyGroup:
    case ErrorCode::kRange:
    case ErrorCode::kDuplicatePoint:
    case ErrorCode::kInsufficientData:
    case ErrorCode::kDegenerateCurve:
    case ErrorCode::kNoOverlap:
    case ErrorCode::kExtrapolation:
    case ErrorCode::kRankingUnavailable:
    case ErrorCode::kInvalidRate:
    case ErrorCode::kInvalidInput:
      return 1;
    case ErrorCode::kSinkClosed:
    case ErrorCode::kDeliveryAborted:
    case ErrorCode::kSpawn:
    case ErrorCode::kProcess:
      return 3;
    case ErrorCode::kInvalidGeometry:
    case ErrorCode::kParse:
    case ErrorCode::kTruncated:
    case ErrorCode::kValidation:
    case ErrorCode::kTemplate:
    case ErrorCode::kSchema:
    case ErrorCode::kConfig:
    case ErrorCode::kIo:
    case ErrorCode::kUsage:
      return 2;
  }
  return 2;
}

}  // namespace pacebench
