#include "pacebench/command_template.h"

#include <gtest/gtest.h>

#include <algorithm>

#include "pacebench/encoder_harness.h"
#include "pacebench/error.h"

namespace pacebench {
namespace {

using Tokens = std::vector<std::string>;

VideoSequence Hd25() {
  VideoSequence seq;
  seq.name = "Blue sky";
  seq.short_name = "BS25";
  seq.path = "/data/bs25.yuv";
  seq.fps = {25, 1};
  seq.width = 1920;
  seq.height = 1080;
  seq.frame_count = 217;
  seq.duration_s = 8.68;
  return seq;
}

EncoderProfile X264() {
  return {"x264",
          {"x264", "--preset", "medium", "--bitrate", "{bitrate_kbps}", "--fps", "{fps}",
           "--demuxer", "raw", "--input-res", "{width}x{height}", "-o", "{output}", "-"},
          InputMode::kStdinRaw,
          OutputMode::kFile};
}

TEST(RenderTemplate, SingleSubstitution) {
  const Tokens tokens = {"enc", "{bitrate_kbps}"};
  EXPECT_EQ(RenderTemplate(tokens, {{"bitrate_kbps", "800"}}), (Tokens{"enc", "800"}));
}

TEST(RenderTemplate, EmbeddedPlaceholders) {
  const Tokens tokens = {"--size={width}x{height}", "{a}{b}"};
  EXPECT_EQ(RenderTemplate(tokens, {{"width", "4"}, {"height", "2"}, {"a", "x"}, {"b", "y"}}),
            (Tokens{"--size=4x2", "xy"}));
}

TEST(RenderTemplate, UnknownPlaceholderNamed) {
  const Tokens tokens = {"enc", "{unknown}"};
  try {
    RenderTemplate(tokens, {{"bitrate_kbps", "1"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTemplate);
    EXPECT_NE(std::string(e.what()).find("unknown"), std::string::npos);
  }
}

TEST(RenderTemplate, UnbalancedBraces) {
  EXPECT_THROW(RenderTemplate(Tokens{"{oops"}, {}), Error);
  EXPECT_THROW(RenderTemplate(Tokens{"oops}"}, {}), Error);
}

TEST(CountPlaceholders, CountsAcrossTokens) {
  const auto counts = CountPlaceholders(Tokens{"{a}", "x{a}{b}", "plain"});
  EXPECT_EQ(counts.at("a"), 2);
  EXPECT_EQ(counts.at("b"), 1);
}

TEST(RenderCommand, X264RunTimeOptions) {
  const Tokens argv = RenderCommand(X264(), Hd25(), 2500, "/tmp/out.264");
  const Tokens expected = {"x264", "--preset", "medium", "--bitrate", "2500", "--fps", "25",
                           "--demuxer", "raw", "--input-res", "1920x1080", "-o",
                           "/tmp/out.264", "-"};
  EXPECT_EQ(argv, expected);
  for (const auto& t : argv) EXPECT_EQ(t.find('{'), std::string::npos) << t;
}

TEST(RenderCommand, FractionalRateAndFileInput) {
  VideoSequence seq = Hd25();
  seq.fps = {30000, 1001};
  EncoderProfile p{"enc",
                   {"enc", "{input}", "{fps}", "{fps_num}", "{fps_den}", "{bitrate_kbps}",
                    "{output}"},
                   InputMode::kFile,
                   OutputMode::kFile};
  EXPECT_EQ(RenderCommand(p, seq, 900, "o"),
            (Tokens{"enc", "/data/bs25.yuv", "30000/1001", "30000", "1001", "900", "o"}));
  p.input_mode = InputMode::kStdinRaw;
  EXPECT_EQ(RenderCommand(p, seq, 900, "o")[1], "-");
}

TEST(RenderCommand, InjectiveInBitrate) {
  const EncoderProfile p = X264();
  const VideoSequence seq = Hd25();
  const std::vector<int64_t> ladder = {800, 900, 1000, 1250, 1500, 1750, 2000, 2500, 5000, 10000};
  std::vector<Tokens> seen;
  for (int64_t b : ladder) {
    const Tokens argv = RenderCommand(p, seq, b, "o");
    EXPECT_EQ(argv, RenderCommand(p, seq, b, "o"));
    EXPECT_EQ(std::find(seen.begin(), seen.end(), argv), seen.end());
    seen.push_back(argv);
  }
}

TEST(ValidateProfile, PlaceholderCounts) {
  EXPECT_NO_THROW(ValidateProfile(X264()));
  EncoderProfile missing{"a", {"enc", "{output}"}, InputMode::kStdinRaw, OutputMode::kFile};
  EXPECT_THROW(ValidateProfile(missing), Error);
  EncoderProfile twice{"a", {"enc", "{bitrate_kbps}", "{bitrate_kbps}", "{output}"},
                       InputMode::kStdinRaw, OutputMode::kFile};
  EXPECT_THROW(ValidateProfile(twice), Error);
  EncoderProfile no_output{"a", {"enc", "{bitrate_kbps}"}, InputMode::kStdinRaw,
                           OutputMode::kFile};
  EXPECT_THROW(ValidateProfile(no_output), Error);
  EncoderProfile stdout_ok{"a", {"enc", "{bitrate_kbps}"}, InputMode::kStdinRaw,
                           OutputMode::kStdout};
  EXPECT_NO_THROW(ValidateProfile(stdout_ok));
  EncoderProfile stdout_bad{"a", {"enc", "{bitrate_kbps}", "{output}"}, InputMode::kStdinRaw,
                            OutputMode::kStdout};
  EXPECT_THROW(ValidateProfile(stdout_bad), Error);
}

}  // namespace
}  // namespace pacebench
