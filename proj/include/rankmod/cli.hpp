#pragma once

#include "rankmod/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace rankmod::cli {

/// Process exit codes. Stable contract for scripts.
enum ExitCode : int {
  kOk = 0,
  kParseError = 2,
  kValidationError = 3,
  kNumericalError = 4,
  kIdentityFailure = 5,
};

int exit_code_for(ErrorKind kind);

/// Runs one command line (without the program name). Reports go to `out` as
/// JSON; errors go to `err` as a JSON object {"error", "message", ...}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rankmod::cli
