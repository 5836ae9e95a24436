#include "pacebench/encoder_harness.h"

#include <cmath>
#include <numeric>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <spdlog/spdlog.h>

#include "pacebench/byte_sink.h"
#include "pacebench/command_template.h"
#include "pacebench/subprocess.h"

namespace pacebench {
namespace {

double Seconds(Clock::duration d) {
  return std::chrono::duration<double>(d).count();
}

std::string TailOf(const std::string& text, size_t max_bytes = 2048) {
  if (text.size() <= max_bytes) return text;
  return text.substr(text.size() - max_bytes);
}

RunRecord BaseRecord(const RunRequest& request, RunMode mode) {
  RunRecord record;
  record.profile_name = request.profile->name;
  record.sequence_short_name = request.sequence->short_name;
  record.target_bitrate_kbps = request.bitrate_kbps;
  record.mode = mode;
  record.repetition = request.repetition;
  record.output_path = request.output_path;
  return record;
}

ChildProcess SpawnEncoder(const RunRequest& request, RunRecord& record) {
  const EncoderProfile& profile = *request.profile;
  ValidateProfile(profile);
  const auto argv = RenderCommand(profile, *request.sequence, request.bitrate_kbps,
                                  request.output_path);
  SpawnOptions options;
  options.pipe_stdin = profile.input_mode != InputMode::kFile;
  if (profile.output_mode == OutputMode::kStdout) {
    options.stdout_path = request.output_path;
  }
  if (request.output_path.has_parent_path()) {
    std::filesystem::create_directories(request.output_path.parent_path());
  }
  spdlog::debug("spawning {}", fmt::join(argv, " "));
  try {
    return ChildProcess::Spawn(argv, options);
  } catch (const Error& e) {
    throw RunError(ErrorCode::kSpawn, e.what(), record, "");
  }
}

// Fills the measurements that depend on the finished child.
void FinishRecord(const RunRequest& request, const ChildProcess& child,
                  RunRecord& record) {
  if (record.wall_time_s > 0.0) {
    record.throughput_fps = static_cast<double>(record.frames_in) / record.wall_time_s;
  }
  if (request.profile->output_mode == OutputMode::kStdout) {
    record.output_size_bytes = child.stdout_bytes();
  } else {
    std::error_code ec;
    const auto size = std::filesystem::file_size(request.output_path, ec);
    record.output_size_bytes = ec ? 0 : size;
  }
  record.achieved_bitrate_kbps =
      AchievedBitrate(record.output_size_bytes, request.sequence->duration_s);
}

void CheckExit(const ChildProcess& child, const RunRecord& record) {
  if (record.exit_status != 0) {
    throw RunError(ErrorCode::kProcess,
                   "encoder '" + record.profile_name + "' exited with status " +
                       std::to_string(record.exit_status) + ": " +
                       TailOf(child.stderr_text(), 512),
                   record, child.stderr_text());
  }
}

// Wraps |sink| in Y4M framing when the profile wants a Y4M stream.
class EncoderInput {
 public:
  EncoderInput(FdSink sink, const EncoderProfile& profile, const VideoSequence& seq)
      : sink_(std::move(sink)) {
    if (profile.input_mode == InputMode::kStdinY4m) {
      framing_.emplace(sink_, MakeY4mHeader(seq.width, seq.height, seq.fps));
    }
  }
  ByteSink& sink() { return framing_ ? static_cast<ByteSink&>(*framing_) : sink_; }

 private:
  FdSink sink_;
  std::optional<Y4mFramingSink> framing_;
};

}  // namespace

std::string_view InputModeName(InputMode mode) {
  switch (mode) {
    case InputMode::kStdinRaw: return "stdin_raw";
    case InputMode::kStdinY4m: return "stdin_y4m";
    case InputMode::kFile: return "file";
  }
  return "unknown";
}

InputMode ParseInputMode(std::string_view name) {
  if (name == "stdin_raw") return InputMode::kStdinRaw;
  if (name == "stdin_y4m") return InputMode::kStdinY4m;
  if (name == "file") return InputMode::kFile;
  throw Error(ErrorCode::kConfig, "unknown input_mode '" + std::string(name) + "'");
}

std::string_view OutputModeName(OutputMode mode) {
  return mode == OutputMode::kFile ? "file" : "stdout";
}

OutputMode ParseOutputMode(std::string_view name) {
  if (name == "file") return OutputMode::kFile;
  if (name == "stdout") return OutputMode::kStdout;
  throw Error(ErrorCode::kConfig, "unknown output_mode '" + std::string(name) + "'");
}

std::string_view RunModeName(RunMode mode) {
  return mode == RunMode::kPaced ? "paced" : "unpaced";
}

RunMode ParseRunMode(std::string_view name) {
  if (name == "paced") return RunMode::kPaced;
  if (name == "unpaced") return RunMode::kUnpaced;
  throw Error(ErrorCode::kConfig, "unknown run mode '" + std::string(name) + "'");
}

void ValidateProfile(const EncoderProfile& profile) {
  const std::string label = "profile '" + profile.name + "'";
  if (profile.name.empty()) throw Error(ErrorCode::kConfig, "profile without a name");
  if (profile.command_template.empty()) {
    throw Error(ErrorCode::kTemplate, label + ": empty command template");
  }
  const auto counts = CountPlaceholders(profile.command_template);
  auto count_of = [&](const char* name) {
    auto it = counts.find(name);
    return it == counts.end() ? 0 : it->second;
  };
  if (count_of("bitrate_kbps") != 1) {
    throw Error(ErrorCode::kTemplate,
                label + ": {bitrate_kbps} must appear exactly once");
  }
  const int outputs = count_of("output");
  if (profile.output_mode == OutputMode::kFile && outputs != 1) {
    throw Error(ErrorCode::kTemplate, label + ": {output} must appear exactly once");
  }
  if (profile.output_mode == OutputMode::kStdout && outputs != 0) {
    throw Error(ErrorCode::kTemplate,
                label + ": {output} is not allowed with stdout output");
  }
}

std::vector<std::string> RenderCommand(const EncoderProfile& profile,
                                       const VideoSequence& seq,
                                       int64_t bitrate_kbps,
                                       const std::filesystem::path& output_path) {
  const TemplateVars vars = {
      {"bitrate_kbps", std::to_string(bitrate_kbps)},
      {"fps_num", std::to_string(seq.fps.num)},
      {"fps_den", std::to_string(seq.fps.den)},
      {"fps", seq.fps.ToString()},
      {"width", std::to_string(seq.width)},
      {"height", std::to_string(seq.height)},
      {"input", profile.input_mode == InputMode::kFile ? seq.path.string() : "-"},
      {"output", output_path.string()},
  };
  return RenderTemplate(profile.command_template, vars);
}

RunRecord RunUnpaced(const RunRequest& request) {
  RunRecord record = BaseRecord(request, RunMode::kUnpaced);
  ChildProcess child = SpawnEncoder(request, record);

  bool aborted = false;
  if (request.profile->input_mode == InputMode::kFile) {
    record.frames_in = request.sequence->frame_count;
  } else {
    EncoderInput input(child.TakeStdin(), *request.profile, *request.sequence);
    VideoReader reader(*request.sequence);
    try {
      while (auto frame = reader.Next()) {
        input.sink().Write(frame->payload);
        ++record.frames_in;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSinkClosed) throw;
      aborted = true;
    }
    input.sink().Close();
  }

  record.exit_status = child.Wait();
  record.wall_time_s = Seconds(child.exit_time() - child.spawn_time());
  CheckExit(child, record);
  if (aborted) {
    throw RunError(ErrorCode::kDeliveryAborted,
                   "encoder '" + record.profile_name + "' closed its input after " +
                       std::to_string(record.frames_in) + " frames",
                   record, child.stderr_text());
  }
  FinishRecord(request, child, record);
  return record;
}

RunRecord RunPaced(const RunRequest& request) {
  RunRecord record = BaseRecord(request, RunMode::kPaced);
  if (request.profile->input_mode == InputMode::kFile) {
    throw Error(ErrorCode::kConfig, "profile '" + request.profile->name +
                                        "' reads its input file directly and "
                                        "cannot be paced");
  }
  ChildProcess child = SpawnEncoder(request, record);
  EncoderInput input(child.TakeStdin(), *request.profile, *request.sequence);
  VideoReader reader(*request.sequence);

  std::optional<std::string> abort_message;
  try {
    record.pacing = RunPaced(reader, input.sink(), request.sequence->fps);
  } catch (const DeliveryAbortedError& e) {
    record.pacing = e.partial_report();
    abort_message = e.what();
  }
  input.sink().Close();
  record.frames_in = record.pacing->frames_sent;

  record.exit_status = child.Wait();
  record.wall_time_s = Seconds(child.exit_time() - record.pacing->start_epoch);
  CheckExit(child, record);
  if (abort_message) {
    throw RunError(ErrorCode::kDeliveryAborted,
                   "encoder '" + record.profile_name + "': " + *abort_message, record,
                   child.stderr_text());
  }
  FinishRecord(request, child, record);
  return record;
}

RunRecord RunEncoder(const RunRequest& request, RunMode mode) {
  return mode == RunMode::kPaced ? RunPaced(request) : RunUnpaced(request);
}

double AchievedBitrate(uint64_t output_size_bytes, double duration_s) {
  if (!(duration_s > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "duration must be positive");
  }
  return 8.0 * static_cast<double>(output_size_bytes) / duration_s / 1000.0;
}

ThroughputSummary ThroughputStats(std::span<const double> throughputs) {
  if (throughputs.empty()) {
    throw Error(ErrorCode::kEmptyGroup, "no throughput samples in group");
  }
  ThroughputSummary summary;
  summary.count = throughputs.size();
  const double n = static_cast<double>(throughputs.size());
  summary.mean_fps = std::accumulate(throughputs.begin(), throughputs.end(), 0.0) / n;
  if (throughputs.size() > 1) {
    double ss = 0.0;
    for (double v : throughputs) ss += (v - summary.mean_fps) * (v - summary.mean_fps);
    summary.stddev_fps = std::sqrt(ss / (n - 1.0));
  }
  return summary;
}

std::map<int64_t, ThroughputSummary> ThroughputByBitrate(
    std::span<const RunRecord> records) {
  std::map<int64_t, std::vector<double>> groups;
  for (const auto& r : records) groups[r.target_bitrate_kbps].push_back(r.throughput_fps);
  std::map<int64_t, ThroughputSummary> out;
  for (const auto& [bitrate, values] : groups) out[bitrate] = ThroughputStats(values);
  return out;
}

}  // namespace pacebench
