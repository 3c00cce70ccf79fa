#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cdnsim::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kInfeasible = 2,
  kIoError = 3,
};

/// Runs `cdnsim <args...>` in-process. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cdnsim::cli
