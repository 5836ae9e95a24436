#include "pacebench/dataset.h"

#include <charconv>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "pacebench/atomic_file.h"
#include "pacebench/error.h"

namespace pacebench {
namespace {

using nlohmann::json;

constexpr std::string_view kY4mMagic = "YUV4MPEG2";
constexpr double kMaxFrameCountSlack = 0.5;

int ParseIntField(std::string_view value, char field) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
    throw Error(ErrorCode::kParse,
                std::string("malformed Y4M parameter ") + field);
  }
  return out;
}

bool IsSupportedColorspace(std::string_view cs) {
  return cs == "420" || cs == "420jpeg" || cs == "420paldv" ||
         cs == "420mpeg2";
}

std::string EntryLabel(const json& entry, size_t index) {
  if (entry.is_object() && entry.contains("short_name") &&
      entry["short_name"].is_string()) {
    return "manifest entry '" + entry["short_name"].get<std::string>() + "'";
  }
  return "manifest entry #" + std::to_string(index);
}

template <typename T>
T RequireField(const json& entry, const char* key, const std::string& label) {
  if (!entry.contains(key)) {
    throw Error(ErrorCode::kValidation, label + ": missing field '" + key + "'");
  }
  try {
    return entry.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kValidation,
                label + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace

std::string_view PixelFormatName(PixelFormat fmt) {
  switch (fmt) {
    case PixelFormat::kI420_8bit: return "I420_8bit";
  }
  return "unknown";
}

PixelFormat ParsePixelFormat(std::string_view name) {
  if (name == "I420_8bit") return PixelFormat::kI420_8bit;
  throw Error(ErrorCode::kValidation,
              "unsupported pixel format '" + std::string(name) + "'");
}

size_t FrameByteSize(int width, int height, PixelFormat fmt) {
  if (width <= 0 || height <= 0 || width % 2 != 0 || height % 2 != 0) {
    throw Error(ErrorCode::kInvalidGeometry,
                "4:2:0 frames need positive even dimensions, got " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
  switch (fmt) {
    case PixelFormat::kI420_8bit:
      return static_cast<size_t>(width) * static_cast<size_t>(height) * 3 / 2;
  }
  throw Error(ErrorCode::kInvalidGeometry, "unknown pixel format");
}

VideoSequence ValidateSequence(VideoSequence seq,
                               std::optional<double> duration_s) {
  const std::string label = "sequence '" + seq.short_name + "'";
  if (seq.short_name.empty()) {
    throw Error(ErrorCode::kValidation, "sequence has an empty short_name");
  }
  try {
    FrameInterval(seq.fps);
  } catch (const Error& e) {
    throw Error(ErrorCode::kValidation, label + ": " + e.what());
  }
  try {
    FrameByteSize(seq.width, seq.height, seq.pixel_format);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidGeometry, label + ": " + e.what());
  }
  if (seq.frame_count < 1) {
    throw Error(ErrorCode::kValidation, label + ": frame_count must be >= 1");
  }
  if (duration_s) {
    if (!(*duration_s > 0.0)) {
      throw Error(ErrorCode::kValidation, label + ": duration_s must be positive");
    }
    const double expected = *duration_s * seq.fps.fps();
    if (std::abs(static_cast<double>(seq.frame_count) - expected) >
        kMaxFrameCountSlack) {
      throw Error(ErrorCode::kValidation,
                  label + ": frame_count " + std::to_string(seq.frame_count) +
                      " inconsistent with duration " +
                      std::to_string(*duration_s) + " s at " +
                      seq.fps.ToString() + " fps (expected " +
                      std::to_string(expected) + ")");
    }
    seq.duration_s = *duration_s;
  } else {
    seq.duration_s = static_cast<double>(seq.frame_count) *
                     static_cast<double>(seq.fps.den) /
                     static_cast<double>(seq.fps.num);
  }
  return seq;
}

Y4mHeader ParseY4mHeader(std::string_view bytes) {
  if (bytes.substr(0, kY4mMagic.size()) != kY4mMagic) {
    throw Error(ErrorCode::kParse, "missing YUV4MPEG2 magic");
  }
  const auto eol = bytes.find('\n');
  if (eol == std::string_view::npos) {
    throw Error(ErrorCode::kParse, "unterminated Y4M stream header");
  }
  std::string_view line = bytes.substr(kY4mMagic.size(), eol - kY4mMagic.size());

  Y4mHeader header;
  bool have_w = false, have_h = false, have_f = false;
  while (!line.empty()) {
    const auto start = line.find_first_not_of(' ');
    if (start == std::string_view::npos) break;
    line.remove_prefix(start);
    const auto end = line.find(' ');
    std::string_view token = line.substr(0, end);
    line.remove_prefix(end == std::string_view::npos ? line.size() : end);

    const char tag = token.front();
    const std::string_view value = token.substr(1);
    switch (tag) {
      case 'W':
        header.width = ParseIntField(value, 'W');
        have_w = true;
        break;
      case 'H':
        header.height = ParseIntField(value, 'H');
        have_h = true;
        break;
      case 'F': {
        const auto colon = value.find(':');
        if (colon == std::string_view::npos) {
          throw Error(ErrorCode::kParse, "malformed Y4M parameter F");
        }
        header.fps.num = ParseIntField(value.substr(0, colon), 'F');
        header.fps.den = ParseIntField(value.substr(colon + 1), 'F');
        if (header.fps.num <= 0 || header.fps.den <= 0) {
          throw Error(ErrorCode::kParse, "malformed Y4M parameter F");
        }
        have_f = true;
        break;
      }
      case 'C':
        if (!IsSupportedColorspace(value)) {
          throw Error(ErrorCode::kParse, "unsupported Y4M colorspace parameter C" +
                                             std::string(value));
        }
        break;
      default:
        // I (interlacing), A (aspect), X (comment) do not affect decoding.
        break;
    }
  }
  if (!have_w) throw Error(ErrorCode::kParse, "missing Y4M parameter W");
  if (!have_h) throw Error(ErrorCode::kParse, "missing Y4M parameter H");
  if (!have_f) throw Error(ErrorCode::kParse, "missing Y4M parameter F");
  header.payload_offset = eol + 1;
  return header;
}

std::string MakeY4mHeader(int width, int height, const FrameRate& fps) {
  return std::string(kY4mMagic) + " W" + std::to_string(width) + " H" +
         std::to_string(height) + " F" + std::to_string(fps.num) + ":" +
         std::to_string(fps.den) + " Ip A1:1 C420jpeg\n";
}

VideoReader::VideoReader(const VideoSequence& seq) : VideoReader(seq, seq.path) {}

VideoReader::VideoReader(const VideoSequence& seq,
                         const std::filesystem::path& path)
    : seq_(seq), frame_bytes_(seq.frame_bytes()) {
  Open(path);
}

void VideoReader::Open(const std::filesystem::path& path) {
  in_.open(path, std::ios::binary);
  if (!in_) throw Error(ErrorCode::kIo, "cannot open video " + path.string());

  char magic[9] = {};
  in_.read(magic, sizeof(magic));
  is_y4m_ = in_.gcount() == sizeof(magic) &&
            std::string_view(magic, sizeof(magic)) == kY4mMagic;
  in_.clear();
  in_.seekg(0);
  if (!is_y4m_) return;

  std::string line;
  if (!std::getline(in_, line)) {
    throw Error(ErrorCode::kParse, "unterminated Y4M stream header");
  }
  line.push_back('\n');
  const Y4mHeader header = ParseY4mHeader(line);
  if (header.width != seq_.width || header.height != seq_.height ||
      !(header.fps == seq_.fps)) {
    throw Error(ErrorCode::kValidation,
                "Y4M header of " + path.string() + " (" +
                    std::to_string(header.width) + "x" +
                    std::to_string(header.height) + " @ " +
                    header.fps.ToString() + ") disagrees with manifest entry '" +
                    seq_.short_name + "'");
  }
}

std::optional<FrameBuffer> VideoReader::Next() {
  if (frames_read_ >= seq_.frame_count) return std::nullopt;

  auto truncated = [this](const std::string& what) {
    return Error(ErrorCode::kTruncated,
                 what + " after " + std::to_string(frames_read_) + " frames of '" +
                     seq_.short_name + "'");
  };

  if (is_y4m_) {
    std::string marker;
    if (!std::getline(in_, marker)) throw truncated("stream ended");
    if (marker.rfind("FRAME", 0) != 0) {
      throw Error(ErrorCode::kParse,
                  "expected FRAME marker at frame " + std::to_string(frames_read_));
    }
  }

  FrameBuffer frame;
  frame.width = seq_.width;
  frame.height = seq_.height;
  frame.pixel_format = seq_.pixel_format;
  frame.payload.resize(frame_bytes_);
  in_.read(reinterpret_cast<char*>(frame.payload.data()),
           static_cast<std::streamsize>(frame_bytes_));
  const auto got = static_cast<size_t>(in_.gcount());
  if (got == 0 && !is_y4m_) throw truncated("stream ended");
  if (got != frame_bytes_) throw truncated("truncated frame");
  ++frames_read_;
  return frame;
}

SyntheticFrameSource::SyntheticFrameSource(int width, int height,
                                           int64_t frame_count)
    : width_(width), height_(height), frame_count_(frame_count) {
  FrameByteSize(width, height, PixelFormat::kI420_8bit);
}

std::optional<FrameBuffer> SyntheticFrameSource::Next() {
  if (produced_ >= frame_count_) return std::nullopt;
  FrameBuffer frame;
  frame.width = width_;
  frame.height = height_;
  frame.payload.resize(FrameByteSize(width_, height_, PixelFormat::kI420_8bit));
  const auto seed = static_cast<uint8_t>(produced_ * 7);
  for (size_t i = 0; i < frame.payload.size(); ++i) {
    frame.payload[i] = static_cast<uint8_t>(seed + i);
  }
  ++produced_;
  return frame;
}

std::vector<VideoSequence> ParseManifest(std::string_view json_text,
                                         const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) {
    throw Error(ErrorCode::kValidation, "manifest must be a JSON array");
  }

  std::vector<VideoSequence> out;
  std::set<std::string> seen;
  for (size_t i = 0; i < doc.size(); ++i) {
    const json& entry = doc[i];
    const std::string label = EntryLabel(entry, i);
    if (!entry.is_object()) {
      throw Error(ErrorCode::kValidation, label + " is not an object");
    }
    VideoSequence seq;
    seq.short_name = RequireField<std::string>(entry, "short_name", label);
    seq.name = entry.value("name", seq.short_name);
    std::filesystem::path path = RequireField<std::string>(entry, "path", label);
    seq.path = path.is_relative() ? base_dir / path : path;
    seq.fps.num = RequireField<int64_t>(entry, "fps_num", label);
    seq.fps.den = RequireField<int64_t>(entry, "fps_den", label);
    seq.width = RequireField<int>(entry, "width", label);
    seq.height = RequireField<int>(entry, "height", label);
    seq.pixel_format = ParsePixelFormat(
        RequireField<std::string>(entry, "pixel_format", label));
    seq.frame_count = RequireField<int64_t>(entry, "frame_count", label);
    std::optional<double> duration;
    if (entry.contains("duration_s") && !entry["duration_s"].is_null()) {
      duration = RequireField<double>(entry, "duration_s", label);
    }
    try {
      seq = ValidateSequence(std::move(seq), duration);
    } catch (const Error& e) {
      throw Error(e.code(), label + ": " + e.what());
    }
    if (!seen.insert(seq.short_name).second) {
      throw Error(ErrorCode::kValidation,
                  "duplicate short_name '" + seq.short_name + "' in manifest");
    }
    out.push_back(std::move(seq));
  }
  return out;
}

std::vector<VideoSequence> LoadManifest(const std::filesystem::path& path) {
  return ParseManifest(ReadFileToString(path), path.parent_path());
}

std::string ManifestToJson(const std::vector<VideoSequence>& sequences) {
  json doc = json::array();
  for (const auto& seq : sequences) {
    doc.push_back({{"name", seq.name},
                   {"short_name", seq.short_name},
                   {"path", seq.path.string()},
                   {"fps_num", seq.fps.num},
                   {"fps_den", seq.fps.den},
                   {"width", seq.width},
                   {"height", seq.height},
                   {"pixel_format", PixelFormatName(seq.pixel_format)},
                   {"frame_count", seq.frame_count},
                   {"duration_s", seq.duration_s}});
  }
  return doc.dump(2) + "\n";
}

const VideoSequence& FindSequence(const std::vector<VideoSequence>& sequences,
                                  std::string_view short_name) {
  for (const auto& seq : sequences) {
    if (seq.short_name == short_name) return seq;
  }
  throw Error(ErrorCode::kConfig,
              "sequence '" + std::string(short_name) + "' not in manifest");
}

}  // namespace pacebench
