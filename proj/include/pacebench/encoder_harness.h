#ifndef PACEBENCH_ENCODER_HARNESS_H_
#define PACEBENCH_ENCODER_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pacebench/dataset.h"
#include "pacebench/error.h"
#include "pacebench/pacer.h"

namespace pacebench {

enum class InputMode { kStdinRaw, kStdinY4m, kFile };
enum class OutputMode { kFile, kStdout };
enum class RunMode { kPaced, kUnpaced };

std::string_view InputModeName(InputMode mode);
InputMode ParseInputMode(std::string_view name);
std::string_view OutputModeName(OutputMode mode);
OutputMode ParseOutputMode(std::string_view name);
std::string_view RunModeName(RunMode mode);
RunMode ParseRunMode(std::string_view name);

// An external encoder invocation. Known placeholders: {bitrate_kbps},
// {fps_num}, {fps_den}, {fps}, {width}, {height}, {input}, {output}.
struct EncoderProfile {
  std::string name;
  std::vector<std::string> command_template;
  InputMode input_mode = InputMode::kStdinRaw;
  OutputMode output_mode = OutputMode::kFile;
};

// {bitrate_kbps} must occur exactly once; {output} exactly once for file
// output and not at all for stdout output. Throws kTemplate.
void ValidateProfile(const EncoderProfile& profile);

// {input} is the source path for file input and "-" for stdin input.
std::vector<std::string> RenderCommand(const EncoderProfile& profile,
                                       const VideoSequence& seq,
                                       int64_t bitrate_kbps,
                                       const std::filesystem::path& output_path = "-");

struct RunRecord {
  std::string profile_name;
  std::string sequence_short_name;
  int64_t target_bitrate_kbps = 0;
  RunMode mode = RunMode::kUnpaced;
  int repetition = 0;
  double wall_time_s = 0.0;
  int64_t frames_in = 0;
  double throughput_fps = 0.0;
  uint64_t output_size_bytes = 0;
  double achieved_bitrate_kbps = 0.0;
  std::optional<PacingReport> pacing;
  int exit_status = 0;
  std::filesystem::path output_path;
  std::optional<std::filesystem::path> quality_report;
};

// A run that failed: bad exit status, spawn failure or a consumer that hung
// up early. Carries whatever was measured plus the child's stderr.
class RunError : public Error {
 public:
  RunError(ErrorCode code, const std::string& message, RunRecord partial,
           std::string diagnostics)
      : Error(code, message),
        partial_(std::move(partial)),
        diagnostics_(std::move(diagnostics)) {}
  const RunRecord& partial_record() const { return partial_; }
  const std::string& diagnostics() const { return diagnostics_; }

 private:
  RunRecord partial_;
  std::string diagnostics_;
};

struct RunRequest {
  const EncoderProfile* profile = nullptr;
  const VideoSequence* sequence = nullptr;
  int64_t bitrate_kbps = 0;
  int repetition = 0;
  std::filesystem::path output_path;
};

// Feeds the encoder as fast as it consumes (or lets it read the file itself
// for file input). Wall time runs from spawn to exit.
RunRecord RunUnpaced(const RunRequest& request);

// Feeds the encoder through the pacer at the sequence frame rate. Wall time
// runs from the first frame deadline to exit. Requires stdin input.
RunRecord RunPaced(const RunRequest& request);

RunRecord RunEncoder(const RunRequest& request, RunMode mode);

// 8 * bytes / duration / 1000. Throws kInvalidInput for non-positive duration.
double AchievedBitrate(uint64_t output_size_bytes, double duration_s);

struct ThroughputSummary {
  double mean_fps = 0.0;
  double stddev_fps = 0.0;  // sample (n - 1); 0 for a single value
  size_t count = 0;
};

// Throws kEmptyGroup for an empty list.
ThroughputSummary ThroughputStats(std::span<const double> throughputs);

// Groups by target bitrate and summarizes throughput across the records.
std::map<int64_t, ThroughputSummary> ThroughputByBitrate(
    std::span<const RunRecord> records);

}  // namespace pacebench

#endif  // PACEBENCH_ENCODER_HARNESS_H_
