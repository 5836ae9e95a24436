#include "pacebench/pacer.h"

#include <gtest/gtest.h>
#include <unistd.h>

#include <thread>

#include "pacebench/byte_sink.h"
#include "pacebench/dataset.h"

namespace pacebench {
namespace {

using std::chrono::milliseconds;

TEST(FrameInterval, Ratios) {
  EXPECT_DOUBLE_EQ(FrameInterval(25, 1), 0.040);
  EXPECT_DOUBLE_EQ(FrameInterval(50, 1), 0.020);
  EXPECT_NEAR(FrameInterval(30000, 1001), 0.0333666, 1e-7);
  EXPECT_THROW(FrameInterval(0, 1), Error);
  EXPECT_THROW(FrameInterval(25, 0), Error);
}

TEST(BufferLatency, Anchors) {
  EXPECT_EQ(BufferLatency(60, {30, 1}), 2.0);
  EXPECT_EQ(BufferLatency(0, {25, 1}), 0.0);
  EXPECT_EQ(BufferLatency(25, {25, 1}), 1.0);
}

TEST(PacingSchedule, AbsoluteDeadlines) {
  const auto start = Clock::time_point{};
  PacingSchedule schedule({30000, 1001}, start);
  EXPECT_EQ(schedule.Deadline(0), start);
  // 3000 frames at 30000/1001 fps take exactly 100.1 s.
  EXPECT_EQ(schedule.Deadline(3000) - start, std::chrono::milliseconds(100100));
  PacingSchedule fifty({50, 1}, start);
  EXPECT_EQ(fifty.Deadline(99) - start, std::chrono::milliseconds(1980));
}

TEST(RunPaced, SingleFrameIsImmediate) {
  SyntheticFrameSource source(2, 2, 1);
  NullSink sink;
  const PacingReport report = RunPaced(source, sink, {25, 1});
  EXPECT_EQ(report.frames_sent, 1);
  EXPECT_LT(report.total_duration_s, 0.005);
  EXPECT_EQ(sink.bytes(), 6u);
}

TEST(RunPaced, FastSinkFollowsSchedule) {
  SyntheticFrameSource source(2, 2, 21);
  NullSink sink;
  const PacingReport report = RunPaced(source, sink, {100, 1});
  EXPECT_EQ(report.frames_sent, 21);
  ASSERT_EQ(report.lateness_s.size(), 21u);
  // Sum property: never faster than the schedule.
  EXPECT_GE(report.total_duration_s, 20 * 0.010);
  EXPECT_LT(report.total_duration_s, 20 * 0.010 + 0.02);
  for (double l : report.lateness_s) EXPECT_GE(l, 0.0);
  EXPECT_LE(report.IntervalRateFps(), 100.0 * 1.02);
}

TEST(RunPaced, SlowConsumerShowsGrowingLateness) {
  int fds[2];
  ASSERT_EQ(pipe(fds), 0);
  IgnoreSigpipe();
  constexpr int kW = 256, kH = 128;  // 48 KiB frames, more than half a pipe
  const size_t frame = FrameByteSize(kW, kH, PixelFormat::kI420_8bit);
  std::thread reader([&] {
    std::vector<char> buf(frame);
    for (;;) {
      size_t got = 0;
      while (got < frame) {
        const ssize_t n = read(fds[0], buf.data() + got, frame - got);
        if (n <= 0) {
          close(fds[0]);
          return;
        }
        got += static_cast<size_t>(n);
      }
      std::this_thread::sleep_for(milliseconds(30));
    }
  });
  SyntheticFrameSource source(kW, kH, 20);
  FdSink sink(fds[1], true);
  const PacingReport report = RunPaced(source, sink, {100, 1});
  reader.join();

  ASSERT_EQ(report.lateness_s.size(), 20u);
  EXPECT_GT(report.blocked_time_s, 0.2);
  for (size_t k = 5; k + 1 < report.lateness_s.size(); ++k) {
    EXPECT_GT(report.lateness_s[k + 1], report.lateness_s[k]) << "frame " << k;
  }
  EXPECT_GT(report.MaxLateness(), 0.2);
}

TEST(RunPaced, EarlyCloseAbortsWithPartialReport) {
  int fds[2];
  ASSERT_EQ(pipe(fds), 0);
  IgnoreSigpipe();
  const size_t frame = FrameByteSize(256, 128, PixelFormat::kI420_8bit);
  std::thread reader([&] {
    std::vector<char> buf(frame * 3);
    size_t got = 0;
    while (got < buf.size()) {
      const ssize_t n = read(fds[0], buf.data() + got, buf.size() - got);
      if (n <= 0) break;
      got += static_cast<size_t>(n);
    }
    close(fds[0]);
  });
  SyntheticFrameSource source(256, 128, 50);
  FdSink sink(fds[1], true);
  try {
    RunPaced(source, sink, {200, 1});
    FAIL() << "expected delivery abort";
  } catch (const DeliveryAbortedError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDeliveryAborted);
    EXPECT_GE(e.partial_report().frames_sent, 3);
    EXPECT_LT(e.partial_report().frames_sent, 50);
  }
  reader.join();
}

TEST(PacingReport, Statistics) {
  PacingReport r;
  r.frames_sent = 5;
  r.total_duration_s = 2.0;
  r.lateness_s = {0.0, 0.004, 0.001, 0.003, 0.002};
  EXPECT_DOUBLE_EQ(r.DeliveryRateFps(), 2.5);
  EXPECT_DOUBLE_EQ(r.IntervalRateFps(), 2.0);
  EXPECT_DOUBLE_EQ(r.LatenessPercentile(50), 0.002);
  EXPECT_DOUBLE_EQ(r.LatenessPercentile(100), 0.004);
  EXPECT_DOUBLE_EQ(r.LatenessPercentile(0), 0.0);
  EXPECT_DOUBLE_EQ(r.MaxLateness(), 0.004);
}

}  // namespace
}  // namespace pacebench
