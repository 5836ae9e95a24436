#include "pacebench/pacer.h"

#include <algorithm>
#include <cmath>
#include <thread>

#include <spdlog/spdlog.h>

namespace pacebench {
namespace {

double Seconds(Clock::duration d) {
  return std::chrono::duration<double>(d).count();
}

void WaitUntil(Clock::time_point deadline, std::chrono::nanoseconds spin_window) {
  const auto coarse = deadline - spin_window;
  if (Clock::now() < coarse) std::this_thread::sleep_until(coarse);
  while (Clock::now() < deadline) std::this_thread::yield();
}

}  // namespace

PacingSchedule::PacingSchedule(const FrameRate& fps, Clock::time_point start_epoch)
    : fps_(fps), start_(start_epoch) {
  FrameInterval(fps_);
}

Clock::time_point PacingSchedule::Deadline(int64_t frame_index) const {
  const __int128 ns = static_cast<__int128>(frame_index) * fps_.den * 1'000'000'000 /
                      fps_.num;
  return start_ + std::chrono::duration_cast<Clock::duration>(
                      std::chrono::nanoseconds(static_cast<int64_t>(ns)));
}

double PacingReport::DeliveryRateFps() const {
  if (total_duration_s <= 0.0) return 0.0;
  return static_cast<double>(frames_sent) / total_duration_s;
}

double PacingReport::IntervalRateFps() const {
  if (frames_sent < 2 || total_duration_s <= 0.0) return 0.0;
  return static_cast<double>(frames_sent - 1) / total_duration_s;
}

double PacingReport::LatenessPercentile(double p) const {
  if (lateness_s.empty()) return 0.0;
  std::vector<double> sorted = lateness_s;
  std::sort(sorted.begin(), sorted.end());
  const double rank = std::ceil(std::clamp(p, 0.0, 100.0) / 100.0 *
                                static_cast<double>(sorted.size()));
  const auto index = static_cast<size_t>(std::max(rank, 1.0)) - 1;
  return sorted[index];
}

double PacingReport::MaxLateness() const {
  if (lateness_s.empty()) return 0.0;
  return *std::max_element(lateness_s.begin(), lateness_s.end());
}

PacingReport RunPaced(FrameSource& source, ByteSink& sink, const FrameRate& fps,
                      const PacerOptions& options) {
  PacingReport report;
  const PacingSchedule schedule(fps, options.start_epoch.value_or(Clock::now()));
  report.start_epoch = schedule.start_epoch();

  Clock::time_point last_completion = report.start_epoch;
  for (int64_t k = 0;; ++k) {
    std::optional<FrameBuffer> frame = source.Next();
    if (!frame) break;

    const auto deadline = schedule.Deadline(k);
    WaitUntil(deadline, options.spin_window);

    const auto begin = Clock::now();
    try {
      sink.Write(frame->payload);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSinkClosed) throw;
      report.total_duration_s = Seconds(last_completion - report.start_epoch);
      report.blocked_time_s += Seconds(Clock::now() - begin);
      sink.Close();
      throw DeliveryAbortedError(
          "consumer closed the sink after " + std::to_string(report.frames_sent) +
              " frames",
          std::move(report));
    }
    const auto done = Clock::now();
    report.blocked_time_s += Seconds(done - begin);
    report.lateness_s.push_back(std::max(0.0, Seconds(done - deadline)));
    ++report.frames_sent;
    last_completion = done;
  }

  report.total_duration_s = Seconds(last_completion - report.start_epoch);
  if (options.close_sink) sink.Close();
  spdlog::debug("paced {} frames at {} fps in {:.3f} s, max lateness {:.3f} ms",
                report.frames_sent, fps.ToString(), report.total_duration_s,
                report.MaxLateness() * 1e3);
  return report;
}

double BufferLatency(int64_t buffer_depth_frames, const FrameRate& fps) {
  FrameInterval(fps);
  if (buffer_depth_frames < 0) {
    throw Error(ErrorCode::kInvalidInput, "buffer depth must be non-negative");
  }
  return static_cast<double>(buffer_depth_frames) * static_cast<double>(fps.den) /
         static_cast<double>(fps.num);
}

}  // namespace pacebench
