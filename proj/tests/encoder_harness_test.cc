#include "pacebench/encoder_harness.h"

#include <gtest/gtest.h>

#include <filesystem>

#include "pacebench/error.h"
#include "test_support.h"

namespace pacebench {
namespace {

using testing::BinPath;
using testing::TempDir;
using testing::WriteRawVideo;

// The mock prefixes its output with a one-line "PBMOCK <gain>" header.
constexpr uint64_t kMockHeaderBytes = 9;

EncoderProfile Mock(std::vector<std::string> extra = {},
                    InputMode input = InputMode::kStdinRaw,
                    OutputMode output = OutputMode::kFile) {
  EncoderProfile p;
  p.name = "mock";
  p.input_mode = input;
  p.output_mode = output;
  p.command_template = {BinPath("pacebench-mock-encoder").string(), "--bitrate",
                        "{bitrate_kbps}", "--fps", "{fps}"};
  if (input == InputMode::kStdinY4m) {
    p.command_template.push_back("--y4m");
  } else {
    p.command_template.insert(p.command_template.end(),
                              {"--width", "{width}", "--height", "{height}"});
  }
  if (input == InputMode::kFile) {
    p.command_template.insert(p.command_template.end(), {"--input", "{input}"});
  }
  if (output == OutputMode::kFile) {
    p.command_template.insert(p.command_template.end(), {"--output", "{output}"});
  }
  p.command_template.insert(p.command_template.end(), extra.begin(), extra.end());
  return p;
}

class HarnessTest : public ::testing::Test {
 protected:
  VideoSequence MakeSequence(int w, int h, int fps, int64_t frames) {
    WriteRawVideo(dir_ / "src.yuv", w, h, frames);
    VideoSequence seq;
    seq.name = seq.short_name = "SRC";
    seq.path = dir_ / "src.yuv";
    seq.fps = {fps, 1};
    seq.width = w;
    seq.height = h;
    seq.frame_count = frames;
    return ValidateSequence(seq, std::nullopt);
  }

  RunRequest Request(const EncoderProfile& p, const VideoSequence& s, int64_t kbps) {
    return {&p, &s, kbps, 0, dir_ / "out" / "stream.bin"};
  }

  TempDir dir_;
};

TEST_F(HarnessTest, UnpacedIsNotRateCapped) {
  const VideoSequence seq = MakeSequence(16, 16, 25, 500);
  const EncoderProfile p = Mock();
  const RunRecord r = RunUnpaced(Request(p, seq, 1000));
  EXPECT_EQ(r.exit_status, 0);
  EXPECT_EQ(r.frames_in, 500);
  EXPECT_FALSE(r.pacing.has_value());
  EXPECT_LT(r.wall_time_s, 1.0);
  EXPECT_GT(r.throughput_fps, 500.0);
  EXPECT_DOUBLE_EQ(r.throughput_fps, r.frames_in / r.wall_time_s);
  // 1000 kbps at 25 fps is 5000 bytes per frame.
  EXPECT_EQ(r.output_size_bytes, kMockHeaderBytes + 500u * 5000u);
  EXPECT_DOUBLE_EQ(r.achieved_bitrate_kbps, 8.0 * r.output_size_bytes / 20.0 / 1000.0);
}

TEST_F(HarnessTest, PacedIsCappedAtSourceRate) {
  const VideoSequence seq = MakeSequence(16, 16, 100, 60);
  const EncoderProfile p = Mock();
  const RunRecord r = RunPaced(Request(p, seq, 800));
  ASSERT_TRUE(r.pacing.has_value());
  EXPECT_EQ(r.frames_in, 60);
  EXPECT_EQ(r.pacing->frames_sent, 60);
  EXPECT_LE(r.throughput_fps, 100.0 * 1.02);
  EXPECT_GT(r.throughput_fps, 90.0);
  EXPECT_GE(r.wall_time_s, 59 * 0.010);
}

TEST_F(HarnessTest, SlowEncoderFallsBehind) {
  const VideoSequence seq = MakeSequence(256, 128, 100, 30);
  const EncoderProfile p = Mock({"--sleep-ms", "20"});
  const RunRecord r = RunPaced(Request(p, seq, 800));
  ASSERT_TRUE(r.pacing.has_value());
  EXPECT_NEAR(r.throughput_fps, 50.0, 5.0);
  const auto& late = r.pacing->lateness_s;
  EXPECT_GT(late.back(), late[late.size() / 2]);
  EXPECT_GT(late[late.size() / 2], late[3]);
}

TEST_F(HarnessTest, Y4mAndStdoutModes) {
  const VideoSequence seq = MakeSequence(16, 16, 25, 50);
  const EncoderProfile p = Mock({}, InputMode::kStdinY4m, OutputMode::kStdout);
  const RunRecord r = RunUnpaced(Request(p, seq, 2000));
  EXPECT_EQ(r.frames_in, 50);
  EXPECT_EQ(r.output_size_bytes, kMockHeaderBytes + 50u * 10000u);
  EXPECT_EQ(std::filesystem::file_size(r.output_path), r.output_size_bytes);
}

TEST_F(HarnessTest, FileInputMode) {
  const VideoSequence seq = MakeSequence(16, 16, 25, 40);
  const EncoderProfile p = Mock({}, InputMode::kFile);
  const RunRecord r = RunUnpaced(Request(p, seq, 1000));
  EXPECT_EQ(r.frames_in, 40);
  EXPECT_EQ(r.output_size_bytes, kMockHeaderBytes + 40u * 5000u);
  EXPECT_THROW(RunPaced(Request(p, seq, 1000)), Error);
}

TEST_F(HarnessTest, FailingEncoderCarriesStderr) {
  const VideoSequence seq = MakeSequence(16, 16, 25, 10);
  const EncoderProfile p = Mock({"--exit-code", "1", "--stderr-msg", "unsupported preset"});
  try {
    RunUnpaced(Request(p, seq, 1000));
    FAIL();
  } catch (const RunError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kProcess);
    EXPECT_EQ(e.partial_record().exit_status, 1);
    EXPECT_NE(e.diagnostics().find("unsupported preset"), std::string::npos);
  }
}

TEST_F(HarnessTest, ChattyEncoderDoesNotDeadlock) {
  const VideoSequence seq = MakeSequence(64, 64, 25, 200);
  const EncoderProfile p = Mock({"--stderr-bytes", "1000000"}, InputMode::kStdinRaw,
                                OutputMode::kStdout);
  const RunRecord r = RunUnpaced(Request(p, seq, 10000));
  EXPECT_EQ(r.frames_in, 200);
}

TEST_F(HarnessTest, EarlyCloseIsDeliveryAborted) {
  const VideoSequence seq = MakeSequence(256, 128, 200, 60);
  const EncoderProfile p = Mock({"--max-frames", "10"});
  try {
    RunPaced(Request(p, seq, 1000));
    FAIL();
  } catch (const RunError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDeliveryAborted);
    ASSERT_TRUE(e.partial_record().pacing.has_value());
    EXPECT_GE(e.partial_record().frames_in, 10);
    EXPECT_LT(e.partial_record().frames_in, 60);
  }
  try {
    RunUnpaced(Request(p, seq, 1000));
    FAIL();
  } catch (const RunError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDeliveryAborted);
  }
}

TEST_F(HarnessTest, MissingBinaryIsSpawnError) {
  const VideoSequence seq = MakeSequence(16, 16, 25, 5);
  EncoderProfile p = Mock();
  p.command_template[0] = "/nonexistent/encoder";
  try {
    RunUnpaced(Request(p, seq, 1000));
    FAIL();
  } catch (const RunError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSpawn);
  }
}

TEST(AchievedBitrate, Arithmetic) {
  EXPECT_DOUBLE_EQ(AchievedBitrate(1250000, 10.0), 1000.0);
  EXPECT_DOUBLE_EQ(AchievedBitrate(0, 10.0), 0.0);
  // 8 * 13697500 / 10.96 / 1000 = 9998.175...
  EXPECT_NEAR(AchievedBitrate(13697500, 10.96), 9998.2, 0.05);
  EXPECT_EQ(AchievedBitrate(2 * 13697500, 10.96), 2 * AchievedBitrate(13697500, 10.96));
  try {
    AchievedBitrate(100, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
  }
}

TEST(ThroughputStats, MeanAndSampleStd) {
  const std::vector<double> one = {25.0}, three = {10.0, 20.0, 30.0}, flat = {25, 25, 25};
  auto s = ThroughputStats(one);
  EXPECT_DOUBLE_EQ(s.mean_fps, 25.0);
  EXPECT_DOUBLE_EQ(s.stddev_fps, 0.0);
  s = ThroughputStats(three);
  EXPECT_DOUBLE_EQ(s.mean_fps, 20.0);
  EXPECT_DOUBLE_EQ(s.stddev_fps, 10.0);
  s = ThroughputStats(flat);
  EXPECT_DOUBLE_EQ(s.mean_fps, 25.0);
  EXPECT_DOUBLE_EQ(s.stddev_fps, 0.0);
  try {
    ThroughputStats({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyGroup);
  }
}

TEST(ThroughputStats, GroupsByBitrate) {
  std::vector<RunRecord> records(4);
  records[0].target_bitrate_kbps = 800;
  records[0].throughput_fps = 10;
  records[1].target_bitrate_kbps = 800;
  records[1].throughput_fps = 30;
  records[2].target_bitrate_kbps = 1000;
  records[2].throughput_fps = 5;
  records[3].target_bitrate_kbps = 1000;
  records[3].throughput_fps = 5;
  const auto by = ThroughputByBitrate(records);
  ASSERT_EQ(by.size(), 2u);
  EXPECT_DOUBLE_EQ(by.at(800).mean_fps, 20.0);
  EXPECT_NEAR(by.at(800).stddev_fps, 14.142135623730951, 1e-12);
  EXPECT_DOUBLE_EQ(by.at(1000).stddev_fps, 0.0);
}

TEST(RunMode, Names) {
  EXPECT_EQ(ParseRunMode(RunModeName(RunMode::kPaced)), RunMode::kPaced);
  EXPECT_EQ(ParseInputMode("stdin_y4m"), InputMode::kStdinY4m);
  EXPECT_EQ(ParseOutputMode("stdout"), OutputMode::kStdout);
  EXPECT_THROW(ParseRunMode("fast"), Error);
}

}  // namespace
}  // namespace pacebench
