#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace covertnet {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidationFailed = 1,
  kExitConfigError = 2,
  kExitInfeasible = 3,
};

/// Runs the command line `args` (program name excluded). Progress and result
/// paths go to `out`, diagnostics and usage to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace covertnet
