#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "crowdsense/error.hpp"

namespace crowdsense::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitDataError = 3,
  kExitInfeasible = 4,
};

int exit_code_for(ErrorCode code);

/// Runs one `crowdsense` invocation. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace crowdsense::cli
