#pragma once

#include <iosfwd>

namespace cbal::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitInputError = 2,
};

/// Entry point of the `cbal` tool; returns the process exit code.
/// Normal output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cbal::cli
