#ifndef PACEBENCH_BYTE_SINK_H_
#define PACEBENCH_BYTE_SINK_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

namespace pacebench {

// Destination of paced frame writes. Write() blocks until every byte is
// accepted; a consumer that went away surfaces as Error(kSinkClosed).
class ByteSink {
 public:
  virtual ~ByteSink() = default;
  virtual void Write(std::span<const uint8_t> bytes) = 0;
  // Signals end of stream. Idempotent.
  virtual void Close() = 0;
};

// Process-wide; lets broken pipes surface as EPIPE instead of killing us.
void IgnoreSigpipe();

// Writes to a file descriptor: a pipe to a child's stdin, a FIFO or a file.
class FdSink : public ByteSink {
 public:
  FdSink(int fd, bool owns_fd);
  ~FdSink() override;
  FdSink(const FdSink&) = delete;
  FdSink& operator=(const FdSink&) = delete;

  // Opens |path| for writing ("-" means stdout). FIFOs block until a reader
  // attaches.
  static FdSink OpenPath(const std::filesystem::path& path);
  FdSink(FdSink&& other) noexcept;

  void Write(std::span<const uint8_t> bytes) override;
  void Close() override;
  int fd() const { return fd_; }

 private:
  int fd_;
  bool owns_fd_;
};

// Discards everything.
class NullSink : public ByteSink {
 public:
  void Write(std::span<const uint8_t> bytes) override { bytes_ += bytes.size(); }
  void Close() override {}
  uint64_t bytes() const { return bytes_; }

 private:
  uint64_t bytes_ = 0;
};

// Wraps another sink so that each Write() becomes one Y4M frame: the stream
// header goes out in front of the first frame and every frame gets a FRAME
// marker. Header and marker are coalesced into the same write.
class Y4mFramingSink : public ByteSink {
 public:
  Y4mFramingSink(ByteSink& inner, std::string stream_header);

  void Write(std::span<const uint8_t> frame) override;
  void Close() override { inner_.Close(); }

 private:
  ByteSink& inner_;
  std::string stream_header_;
  bool header_sent_ = false;
  std::string scratch_;
};

}  // namespace pacebench

#endif  // PACEBENCH_BYTE_SINK_H_
