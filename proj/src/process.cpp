#include "floatdv/process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>

namespace floatdv {

namespace {

bool is_executable(const std::string& path) {
  struct stat st {};
  return ::stat(path.c_str(), &st) == 0 && S_ISREG(st.st_mode) && ::access(path.c_str(), X_OK) == 0;
}

void drain(int fd, std::string& into, bool& open) {
  char buf[8192];
  const ssize_t n = ::read(fd, buf, sizeof buf);
  if (n > 0) into.append(buf, static_cast<std::size_t>(n));
  else if (n == 0 || (errno != EINTR && errno != EAGAIN)) open = false;
}

}  // namespace

std::string find_executable(const std::string& program) {
  if (program.empty()) return {};
  if (program.find('/') != std::string::npos) return is_executable(program) ? program : std::string{};
  const char* path = std::getenv("PATH");
  std::string dirs = path ? path : "/usr/local/bin:/usr/bin:/bin";
  std::size_t start = 0;
  while (start <= dirs.size()) {
    std::size_t end = dirs.find(':', start);
    if (end == std::string::npos) end = dirs.size();
    std::string dir = dirs.substr(start, end - start);
    if (dir.empty()) dir = ".";
    const std::string full = dir + "/" + program;
    if (is_executable(full)) return full;
    start = end + 1;
  }
  return {};
}

ProcessResult run_process(const std::vector<std::string>& argv, double timeoutSeconds) {
  using clock = std::chrono::steady_clock;
  ProcessResult r;
  const std::string exe = find_executable(argv.empty() ? std::string{} : argv[0]);
  if (exe.empty()) {
    r.startFailed = true;
    r.err = "executable not found: " + (argv.empty() ? std::string{} : argv[0]);
    return r;
  }

  int out_pipe[2], err_pipe[2];
  if (::pipe2(out_pipe, O_CLOEXEC) != 0 || ::pipe2(err_pipe, O_CLOEXEC) != 0) {
    r.startFailed = true;
    r.err = std::string("pipe: ") + std::strerror(errno);
    return r;
  }

  std::vector<char*> cargv;
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  const auto t0 = clock::now();
  const pid_t pid = ::fork();
  if (pid < 0) {
    r.startFailed = true;
    r.err = std::string("fork: ") + std::strerror(errno);
    for (int fd : {out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) ::close(fd);
    return r;
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::dup2(err_pipe[1], STDERR_FILENO);
    const int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
    ::execv(exe.c_str(), cargv.data());
    _exit(127);
  }
  ::setpgid(pid, pid);  // also from the parent, so the kill below cannot race the child
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);

  const auto deadline = t0 + std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(timeoutSeconds));
  bool out_open = true, err_open = true;
  while (out_open || err_open) {
    const auto now = clock::now();
    if (now >= deadline) {
      r.timedOut = true;
      ::kill(-pid, SIGKILL);
      break;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
    pollfd fds[2];
    nfds_t n = 0;
    if (out_open) fds[n++] = {out_pipe[0], POLLIN, 0};
    if (err_open) fds[n++] = {err_pipe[0], POLLIN, 0};
    const int ready = ::poll(fds, n, static_cast<int>(std::min<long long>(left + 1, 1000)));
    if (ready < 0 && errno != EINTR) break;
    for (nfds_t i = 0; i < n; ++i) {
      if (!(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      if (fds[i].fd == out_pipe[0]) drain(out_pipe[0], r.out, out_open);
      else drain(err_pipe[0], r.err, err_open);
    }
  }
  ::close(out_pipe[0]);
  ::close(err_pipe[0]);

  int status = 0;
  if (!r.timedOut) {
    // Output is closed; give the process the remaining budget to exit.
    while (::waitpid(pid, &status, WNOHANG) == 0) {
      if (clock::now() >= deadline) {
        r.timedOut = true;
        ::kill(-pid, SIGKILL);
        ::waitpid(pid, &status, 0);
        break;
      }
      ::usleep(1000);
    }
  } else {
    ::waitpid(pid, &status, 0);
  }
  ::kill(-pid, SIGKILL);  // stray grandchildren
  r.seconds = std::chrono::duration<double>(clock::now() - t0).count();
  if (!r.timedOut && WIFEXITED(status)) {
    r.exitCode = WEXITSTATUS(status);
    if (r.exitCode == 127 && r.out.empty()) r.startFailed = true;
  }
  return r;
}

}  // namespace floatdv
