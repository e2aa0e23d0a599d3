#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace specband {

enum ExitCode : int {
  kOk = 0,
  kValidationFailure = 1,
  kNumericalFailure = 2,
  kUsage = 64,
};

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace specband
