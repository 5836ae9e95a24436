#ifndef PACEBENCH_DATASET_H_
#define PACEBENCH_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pacebench/frame_rate.h"

namespace pacebench {

enum class PixelFormat { kI420_8bit };

std::string_view PixelFormatName(PixelFormat fmt);
PixelFormat ParsePixelFormat(std::string_view name);

// Planar 4:2:0 8-bit: w*h luma plus two w/2*h/2 chroma planes. Throws
// kInvalidGeometry on odd or non-positive dimensions.
size_t FrameByteSize(int width, int height, PixelFormat fmt);

// Description of one raw source clip. Immutable once validated.
struct VideoSequence {
  std::string name;
  std::string short_name;
  std::filesystem::path path;
  FrameRate fps;
  int width = 0;
  int height = 0;
  PixelFormat pixel_format = PixelFormat::kI420_8bit;
  int64_t frame_count = 0;
  double duration_s = 0.0;

  size_t frame_bytes() const { return FrameByteSize(width, height, pixel_format); }
};

// Checks the sequence invariants. When |duration_s| is absent it is derived
// from frame_count and fps; when present, |frame_count - duration*fps| must
// be at most half a frame. Throws kValidation / kInvalidGeometry.
VideoSequence ValidateSequence(VideoSequence seq,
                               std::optional<double> duration_s);

struct FrameBuffer {
  std::vector<uint8_t> payload;  // Y plane, then U, then V
  int width = 0;
  int height = 0;
  PixelFormat pixel_format = PixelFormat::kI420_8bit;
};

struct Y4mHeader {
  int width = 0;
  int height = 0;
  FrameRate fps;
  // Offset of the first FRAME marker.
  size_t payload_offset = 0;
};

// Parses the YUV4MPEG2 stream header line. Only 8-bit 4:2:0 colorspaces are
// accepted; a missing C parameter means 4:2:0. Throws kParse naming the field.
Y4mHeader ParseY4mHeader(std::string_view bytes);

std::string MakeY4mHeader(int width, int height, const FrameRate& fps);
inline constexpr std::string_view kY4mFrameMarker = "FRAME\n";

class FrameSource {
 public:
  virtual ~FrameSource() = default;
  // Returns the next frame, or nullopt at end of stream.
  virtual std::optional<FrameBuffer> Next() = 0;
  virtual int64_t frames_read() const = 0;
};

// Reads .y4m or headerless .yuv files described by a manifest entry. For Y4M
// the file header must agree with the entry's geometry and frame rate.
class VideoReader : public FrameSource {
 public:
  explicit VideoReader(const VideoSequence& seq);
  VideoReader(const VideoSequence& seq, const std::filesystem::path& path);

  std::optional<FrameBuffer> Next() override;
  int64_t frames_read() const override { return frames_read_; }
  bool is_y4m() const { return is_y4m_; }

 private:
  void Open(const std::filesystem::path& path);

  VideoSequence seq_;
  std::ifstream in_;
  bool is_y4m_ = false;
  size_t frame_bytes_ = 0;
  int64_t frames_read_ = 0;
};

// Deterministic generated frames; used by tests and timing runs that do not
// need real content.
class SyntheticFrameSource : public FrameSource {
 public:
  SyntheticFrameSource(int width, int height, int64_t frame_count);

  std::optional<FrameBuffer> Next() override;
  int64_t frames_read() const override { return produced_; }

 private:
  int width_;
  int height_;
  int64_t frame_count_;
  int64_t produced_ = 0;
};

// Manifest: JSON array of sequence objects. Relative paths are resolved
// against |base_dir|. Duplicate short names are rejected.
std::vector<VideoSequence> ParseManifest(std::string_view json_text,
                                         const std::filesystem::path& base_dir);
std::vector<VideoSequence> LoadManifest(const std::filesystem::path& path);
std::string ManifestToJson(const std::vector<VideoSequence>& sequences);

const VideoSequence& FindSequence(const std::vector<VideoSequence>& sequences,
                                  std::string_view short_name);

}  // namespace pacebench

#endif  // PACEBENCH_DATASET_H_
