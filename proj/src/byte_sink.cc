#include "pacebench/byte_sink.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <csignal>
#include <cstring>
#include <mutex>

#include "pacebench/dataset.h"
#include "pacebench/error.h"

namespace pacebench {

void IgnoreSigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

FdSink::FdSink(int fd, bool owns_fd) : fd_(fd), owns_fd_(owns_fd) {
  IgnoreSigpipe();
}

FdSink::FdSink(FdSink&& other) noexcept
    : fd_(other.fd_), owns_fd_(other.owns_fd_) {
  other.fd_ = -1;
  other.owns_fd_ = false;
}

FdSink::~FdSink() { Close(); }

FdSink FdSink::OpenPath(const std::filesystem::path& path) {
  if (path == "-") return FdSink(STDOUT_FILENO, false);
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) {
    throw Error(ErrorCode::kIo,
                "cannot open " + path.string() + ": " + std::strerror(errno));
  }
  return FdSink(fd, true);
}

void FdSink::Write(std::span<const uint8_t> bytes) {
  if (fd_ < 0) throw Error(ErrorCode::kSinkClosed, "write to closed sink");
  size_t done = 0;
  while (done < bytes.size()) {
    const ssize_t n = ::write(fd_, bytes.data() + done, bytes.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      if (errno == EPIPE) {
        throw Error(ErrorCode::kSinkClosed, "consumer closed the pipe");
      }
      throw Error(ErrorCode::kIo, std::string("write failed: ") + std::strerror(errno));
    }
    done += static_cast<size_t>(n);
  }
}

void FdSink::Close() {
  if (fd_ >= 0 && owns_fd_) ::close(fd_);
  fd_ = -1;
}

Y4mFramingSink::Y4mFramingSink(ByteSink& inner, std::string stream_header)
    : inner_(inner), stream_header_(std::move(stream_header)) {}

void Y4mFramingSink::Write(std::span<const uint8_t> frame) {
  scratch_.clear();
  if (!header_sent_) scratch_ += stream_header_;
  scratch_ += kY4mFrameMarker;
  scratch_.append(reinterpret_cast<const char*>(frame.data()), frame.size());
  inner_.Write({reinterpret_cast<const uint8_t*>(scratch_.data()), scratch_.size()});
  header_sent_ = true;
}

}  // namespace pacebench
