#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kreach {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitIo = 3,
  kExitNumerical = 4,
};

/// Runs the command line `args` (without the program name). Results and
/// summaries go to `out`; timings and diagnostics go to `log`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& log);

}  // namespace kreach
