#ifndef PACEBENCH_PACER_H_
#define PACEBENCH_PACER_H_

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "pacebench/byte_sink.h"
#include "pacebench/dataset.h"
#include "pacebench/error.h"
#include "pacebench/frame_rate.h"

namespace pacebench {

using Clock = std::chrono::steady_clock;

// Absolute frame deadlines: deadline(k) = start + k * den / num seconds,
// computed from the frame index so sleep error never accumulates.
class PacingSchedule {
 public:
  PacingSchedule(const FrameRate& fps, Clock::time_point start_epoch);

  Clock::time_point Deadline(int64_t frame_index) const;
  Clock::time_point start_epoch() const { return start_; }
  double frame_interval_s() const { return FrameInterval(fps_); }
  const FrameRate& fps() const { return fps_; }

 private:
  FrameRate fps_;
  Clock::time_point start_;
};

struct PacingReport {
  int64_t frames_sent = 0;
  // From deadline(0) to completion of the last write.
  double total_duration_s = 0.0;
  // Write-completion time minus deadline, clamped at zero, one per frame.
  std::vector<double> lateness_s;
  // Time spent inside sink writes.
  double blocked_time_s = 0.0;
  Clock::time_point start_epoch;

  // Frames per second over the delivery window.
  double DeliveryRateFps() const;
  // (frames_sent - 1) / total_duration_s: the inter-frame delivery rate,
  // which never exceeds the schedule rate. Zero for fewer than two frames.
  double IntervalRateFps() const;
  // Nearest-rank percentile of lateness, p in [0, 100].
  double LatenessPercentile(double p) const;
  double MaxLateness() const;
};

// The consumer stopped reading before every frame was delivered.
class DeliveryAbortedError : public Error {
 public:
  DeliveryAbortedError(const std::string& message, PacingReport partial)
      : Error(ErrorCode::kDeliveryAborted, message), partial_(std::move(partial)) {}
  const PacingReport& partial_report() const { return partial_; }

 private:
  PacingReport partial_;
};

struct PacerOptions {
  // Sleep until this long before a deadline, then spin.
  std::chrono::nanoseconds spin_window = std::chrono::milliseconds(2);
  // Close the sink after the final frame.
  bool close_sink = true;
  // Defaults to the clock reading when pacing starts.
  std::optional<Clock::time_point> start_epoch;
};

// Writes frames from |source| to |sink| so that frame k's write starts no
// earlier than deadline(k). Writes block; a slow consumer shows up as
// lateness and blocked time, never as dropped frames. Throws
// DeliveryAbortedError if the sink closes early.
PacingReport RunPaced(FrameSource& source, ByteSink& sink, const FrameRate& fps,
                      const PacerOptions& options = {});

// Time to fill a frame buffer of |buffer_depth_frames| at the capture rate.
double BufferLatency(int64_t buffer_depth_frames, const FrameRate& fps);

}  // namespace pacebench

#endif  // PACEBENCH_PACER_H_
