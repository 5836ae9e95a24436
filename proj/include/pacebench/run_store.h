#ifndef PACEBENCH_RUN_STORE_H_
#define PACEBENCH_RUN_STORE_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pacebench/encoder_harness.h"

namespace pacebench {

// Replaces anything outside [A-Za-z0-9._-] with '_'.
std::string SafeFileStem(std::string_view text);

// "<profile>__<seq>__<bitrate>k__<mode>__r<rep>", filesystem safe.
std::string RunId(const RunRecord& record);
// Shared by paced and unpaced runs of the same encode settings.
std::string QualityReportName(const RunRecord& record);

std::string RunRecordToJson(const RunRecord& record);
RunRecord RunRecordFromJson(std::string_view text);

// runs.csv columns: profile, seq, bitrate_kbps, mode, wall_time_s, frames,
// throughput_fps, output_bytes, achieved_kbps. Doubles are written in their
// shortest exact form so parsing gives back identical values.
std::string RunsToCsv(const std::vector<RunRecord>& records);
std::vector<RunRecord> ParseRunsCsv(std::string_view text);

// <dir>/runs/<id>.json, written atomically.
void SaveRunRecord(const std::filesystem::path& dir, const RunRecord& record);
// Every record under <dir>/runs, ordered by run id.
std::vector<RunRecord> LoadRunRecords(const std::filesystem::path& dir);

}  // namespace pacebench

#endif  // PACEBENCH_RUN_STORE_H_
