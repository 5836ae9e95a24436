#ifndef PACEBENCH_SUBPROCESS_H_
#define PACEBENCH_SUBPROCESS_H_

#include <sys/types.h>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pacebench/pacer.h"

namespace pacebench {

struct SpawnOptions {
  // When false the child's stdin is /dev/null.
  bool pipe_stdin = true;
  // Where the child's stdout goes; discarded (but counted) when unset.
  std::optional<std::filesystem::path> stdout_path;
  size_t stderr_limit_bytes = 64 * 1024;
};

// A child process whose stdout and stderr are drained on their own threads
// from the moment it starts, so a chatty child can never block on a full
// output pipe while the parent is blocked feeding its stdin. argv is passed
// to the program directly; there is no shell.
class ChildProcess {
 public:
  // Throws Error(kSpawn) if the program cannot be started.
  static ChildProcess Spawn(const std::vector<std::string>& argv,
                            const SpawnOptions& options = {});

  ChildProcess(ChildProcess&&) noexcept;
  ChildProcess& operator=(ChildProcess&&) noexcept;
  ~ChildProcess();

  // Hands out the write end of the child's stdin. Valid once.
  FdSink TakeStdin();

  // Waits for exit and for both drains to finish. Returns the exit status,
  // or 128 + signal number when the child was killed.
  int Wait();
  void Kill();

  Clock::time_point spawn_time() const;
  Clock::time_point exit_time() const;
  // Valid after Wait().
  const std::string& stderr_text() const;
  uint64_t stdout_bytes() const;
  pid_t pid() const;

 private:
  struct State;
  explicit ChildProcess(std::unique_ptr<State> state);

  std::unique_ptr<State> state_;
};

}  // namespace pacebench

#endif  // PACEBENCH_SUBPROCESS_H_
