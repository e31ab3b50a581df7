#pragma once

#include <string>
#include <vector>

namespace floatdv {

struct ProcessResult {
  int exitCode = -1;       // -1 when killed or never started
  bool timedOut = false;
  bool startFailed = false;
  std::string out;
  std::string err;
  double seconds = 0;
};

/// Runs argv[0] (looked up in PATH) in its own process group. After
/// `timeoutSeconds` the whole group is killed.
ProcessResult run_process(const std::vector<std::string>& argv, double timeoutSeconds);

/// Full path of `program` if it is an executable file or found in PATH.
std::string find_executable(const std::string& program);

}  // namespace floatdv
