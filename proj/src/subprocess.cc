#include "pacebench/subprocess.h"

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <atomic>
#include <cerrno>
#include <cstring>
#include <thread>
#include <utility>

#include "pacebench/error.h"

extern char** environ;

namespace pacebench {

struct ChildProcess::State {
  pid_t pid = -1;
  int stdin_fd = -1;
  std::thread stdout_drain;
  std::thread stderr_drain;
  std::string stderr_text;
  std::atomic<uint64_t> stdout_bytes{0};
  std::optional<int> exit_status;
  Clock::time_point spawn_time;
  Clock::time_point exit_time;
};

namespace {

class Pipe {
 public:
  Pipe() {
    if (::pipe2(fds_, O_CLOEXEC) != 0) {
      throw Error(ErrorCode::kSpawn, std::string("pipe: ") + std::strerror(errno));
    }
  }
  ~Pipe() {
    CloseRead();
    CloseWrite();
  }
  int read_fd() const { return fds_[0]; }
  int write_fd() const { return fds_[1]; }
  int ReleaseRead() { return std::exchange(fds_[0], -1); }
  int ReleaseWrite() { return std::exchange(fds_[1], -1); }
  void CloseRead() {
    if (fds_[0] >= 0) ::close(std::exchange(fds_[0], -1));
  }
  void CloseWrite() {
    if (fds_[1] >= 0) ::close(std::exchange(fds_[1], -1));
  }

 private:
  int fds_[2] = {-1, -1};
};

ssize_t ReadSome(int fd, char* buf, size_t len) {
  for (;;) {
    const ssize_t n = ::read(fd, buf, len);
    if (n < 0 && errno == EINTR) continue;
    return n;
  }
}

void DrainToFd(int src, int dst, std::atomic<uint64_t>* counter) {
  std::array<char, 64 * 1024> buf;
  for (;;) {
    const ssize_t n = ReadSome(src, buf.data(), buf.size());
    if (n <= 0) break;
    *counter += static_cast<uint64_t>(n);
    if (dst < 0) continue;
    ssize_t off = 0;
    while (off < n) {
      const ssize_t w = ::write(dst, buf.data() + off, static_cast<size_t>(n - off));
      if (w < 0) {
        if (errno == EINTR) continue;
        break;
      }
      off += w;
    }
  }
  ::close(src);
  if (dst >= 0) ::close(dst);
}

void DrainToString(int src, std::string* out, size_t limit) {
  std::array<char, 4096> buf;
  for (;;) {
    const ssize_t n = ReadSome(src, buf.data(), buf.size());
    if (n <= 0) break;
    const size_t room = limit > out->size() ? limit - out->size() : 0;
    out->append(buf.data(), std::min(room, static_cast<size_t>(n)));
  }
  ::close(src);
}

}  // namespace

ChildProcess::ChildProcess(std::unique_ptr<State> state) : state_(std::move(state)) {}
ChildProcess::ChildProcess(ChildProcess&&) noexcept = default;
ChildProcess& ChildProcess::operator=(ChildProcess&&) noexcept = default;

ChildProcess::~ChildProcess() {
  if (!state_) return;
  if (!state_->exit_status) {
    Kill();
    Wait();
  }
  if (state_->stdin_fd >= 0) ::close(state_->stdin_fd);
}

ChildProcess ChildProcess::Spawn(const std::vector<std::string>& argv,
                                 const SpawnOptions& options) {
  if (argv.empty()) throw Error(ErrorCode::kSpawn, "empty command line");

  IgnoreSigpipe();

  int out_file = -1;
  if (options.stdout_path) {
    out_file = ::open(options.stdout_path->c_str(),
                      O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
    if (out_file < 0) {
      throw Error(ErrorCode::kIo, "cannot open " + options.stdout_path->string() +
                                      ": " + std::strerror(errno));
    }
  }

  Pipe in_pipe, out_pipe, err_pipe;

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  if (options.pipe_stdin) {
    posix_spawn_file_actions_adddup2(&actions, in_pipe.read_fd(), STDIN_FILENO);
  } else {
    posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);
  }
  posix_spawn_file_actions_adddup2(&actions, out_pipe.write_fd(), STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, err_pipe.write_fd(), STDERR_FILENO);

  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  sigset_t defaults;
  sigemptyset(&defaults);
  sigaddset(&defaults, SIGPIPE);
  posix_spawnattr_setsigdefault(&attr, &defaults);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETSIGDEF);

  std::vector<char*> cargv;
  cargv.reserve(argv.size() + 1);
  for (const auto& arg : argv) cargv.push_back(const_cast<char*>(arg.c_str()));
  cargv.push_back(nullptr);

  auto state = std::make_unique<State>();
  state->spawn_time = Clock::now();
  const int rc = ::posix_spawnp(&state->pid, cargv[0], &actions, &attr,
                                cargv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  if (rc != 0) {
    if (out_file >= 0) ::close(out_file);
    throw Error(ErrorCode::kSpawn,
                "cannot start '" + argv[0] + "': " + std::strerror(rc));
  }

  in_pipe.CloseRead();
  out_pipe.CloseWrite();
  err_pipe.CloseWrite();
  if (options.pipe_stdin) state->stdin_fd = in_pipe.ReleaseWrite();

  State* raw = state.get();
  state->stdout_drain = std::thread(DrainToFd, out_pipe.ReleaseRead(), out_file,
                                    &raw->stdout_bytes);
  state->stderr_drain = std::thread(DrainToString, err_pipe.ReleaseRead(),
                                    &raw->stderr_text, options.stderr_limit_bytes);
  return ChildProcess(std::move(state));
}

FdSink ChildProcess::TakeStdin() {
  if (state_->stdin_fd < 0) {
    throw Error(ErrorCode::kSpawn, "child stdin is not available");
  }
  return FdSink(std::exchange(state_->stdin_fd, -1), true);
}

int ChildProcess::Wait() {
  State& s = *state_;
  if (s.exit_status) return *s.exit_status;
  if (s.stdin_fd >= 0) ::close(std::exchange(s.stdin_fd, -1));

  int status = 0;
  pid_t r;
  do {
    r = ::waitpid(s.pid, &status, 0);
  } while (r < 0 && errno == EINTR);
  s.exit_time = Clock::now();

  if (s.stdout_drain.joinable()) s.stdout_drain.join();
  if (s.stderr_drain.joinable()) s.stderr_drain.join();

  if (r < 0) {
    s.exit_status = 255;
  } else if (WIFEXITED(status)) {
    s.exit_status = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    s.exit_status = 128 + WTERMSIG(status);
  } else {
    s.exit_status = 255;
  }
  return *s.exit_status;
}

void ChildProcess::Kill() {
  if (state_ && !state_->exit_status && state_->pid > 0) {
    ::kill(state_->pid, SIGKILL);
  }
}

Clock::time_point ChildProcess::spawn_time() const { return state_->spawn_time; }
Clock::time_point ChildProcess::exit_time() const { return state_->exit_time; }
const std::string& ChildProcess::stderr_text() const { return state_->stderr_text; }
uint64_t ChildProcess::stdout_bytes() const { return state_->stdout_bytes; }
pid_t ChildProcess::pid() const { return state_->pid; }

}  // namespace pacebench
