// A stand-in encoder. It reads raw or Y4M frames, optionally sleeps after
// each one, and writes bitrate-sized filler so output size tracks the
// requested bitrate.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pacebench/dataset.h"
#include "pacebench/error.h"
#include "pacebench/frame_rate.h"

namespace {

struct Options {
  std::string input = "-";
  std::string output = "-";
  int64_t bitrate_kbps = 1000;
  std::string fps = "25";
  int64_t frame_bytes = 0;
  int width = 0;
  int height = 0;
  bool y4m = false;
  double sleep_ms = 0.0;
  int64_t max_frames = -1;
  int exit_code = 0;
  std::string stderr_msg;
  int64_t stderr_bytes = 0;
  double quality_gain = 1.0;
};

bool ReadExact(std::FILE* in, std::vector<char>& buf, size_t n) {
  buf.resize(n);
  return std::fread(buf.data(), 1, n, in) == n;
}

bool ReadLine(std::FILE* in, std::string& line) {
  line.clear();
  for (int c = std::fgetc(in); c != EOF; c = std::fgetc(in)) {
    line += static_cast<char>(c);
    if (c == '\n') return true;
  }
  return false;
}

int Run(const Options& opt) {
  if (!opt.stderr_msg.empty()) std::cerr << opt.stderr_msg << std::endl;
  if (opt.stderr_bytes > 0) std::cerr << std::string(opt.stderr_bytes, 'e') << std::flush;
  if (opt.exit_code != 0) return opt.exit_code;

  std::FILE* in = opt.input == "-" ? stdin : std::fopen(opt.input.c_str(), "rb");
  std::FILE* out = opt.output == "-" ? stdout : std::fopen(opt.output.c_str(), "wb");
  if (!in || !out) {
    std::cerr << "mock-encoder: cannot open input or output" << std::endl;
    return 2;
  }

  pacebench::FrameRate fps = pacebench::FrameRate::Parse(opt.fps);
  size_t frame_bytes = static_cast<size_t>(opt.frame_bytes);
  if (opt.y4m) {
    std::string header;
    if (!ReadLine(in, header)) {
      std::cerr << "mock-encoder: missing Y4M header" << std::endl;
      return 2;
    }
    const auto parsed = pacebench::ParseY4mHeader(header);
    fps = parsed.fps;
    frame_bytes = pacebench::FrameByteSize(parsed.width, parsed.height,
                                           pacebench::PixelFormat::kI420_8bit);
  } else if (frame_bytes == 0) {
    frame_bytes = pacebench::FrameByteSize(opt.width, opt.height,
                                           pacebench::PixelFormat::kI420_8bit);
  }

  std::fprintf(out, "PBMOCK %.17g\n", opt.quality_gain);
  // Bytes owed after k frames: k * kbps * 125 * den / num.
  const __int128 per_frame_num = static_cast<__int128>(opt.bitrate_kbps) * 125 * fps.den;
  std::vector<char> frame;
  std::string marker;
  std::vector<char> filler;
  int64_t frames = 0;
  int64_t written = 0;
  while (opt.max_frames < 0 || frames < opt.max_frames) {
    if (opt.y4m) {
      if (!ReadLine(in, marker)) break;
      if (marker.rfind("FRAME", 0) != 0) {
        std::cerr << "mock-encoder: bad frame marker" << std::endl;
        return 2;
      }
    }
    if (!ReadExact(in, frame, frame_bytes)) break;
    ++frames;
    if (opt.sleep_ms > 0) {
      std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(opt.sleep_ms));
    }
    const int64_t owed = static_cast<int64_t>(per_frame_num * frames / fps.num);
    filler.assign(static_cast<size_t>(owed - written), 'x');
    if (!filler.empty() && std::fwrite(filler.data(), 1, filler.size(), out) != filler.size()) {
      std::cerr << "mock-encoder: write failed" << std::endl;
      return 2;
    }
    written = owed;
  }
  std::fflush(out);
  if (out != stdout) std::fclose(out);
  if (in != stdin) std::fclose(in);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Mock encoder for pacebench tests", "pacebench-mock-encoder"};
  app.add_option("--input", opt.input, "Input path or '-'");
  app.add_option("--output", opt.output, "Output path or '-'");
  app.add_option("--bitrate", opt.bitrate_kbps, "Target bitrate in kbps");
  app.add_option("--fps", opt.fps, "Frame rate n/d (raw input)");
  app.add_option("--frame-bytes", opt.frame_bytes, "Bytes per raw frame");
  app.add_option("--width", opt.width, "Frame width (raw input)");
  app.add_option("--height", opt.height, "Frame height (raw input)");
  app.add_flag("--y4m", opt.y4m, "Input is a Y4M stream");
  app.add_option("--sleep-ms", opt.sleep_ms, "Sleep after each frame");
  app.add_option("--max-frames", opt.max_frames, "Stop reading after this many frames");
  app.add_option("--exit-code", opt.exit_code, "Exit immediately with this status");
  app.add_option("--stderr-msg", opt.stderr_msg, "Message to print on stderr");
  app.add_option("--stderr-bytes", opt.stderr_bytes, "Filler bytes to print on stderr");
  app.add_option("--quality-gain", opt.quality_gain,
                 "Recorded in the stream; the mock metric scales quality by it");
  CLI11_PARSE(app, argc, argv);
  try {
    return Run(opt);
  } catch (const pacebench::Error& e) {
    std::cerr << "mock-encoder: " << e.what() << std::endl;
    return 2;
  }
}
