#pragma once

#include <ostream>

namespace foon::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitNotFound = 1,
  kExitInputError = 2,
  kExitUsage = 3,
};

/// Entry point behind the `foon` binary:
///
///   foon validate <foon.txt>
///   foon retrieve --foon F --kitchen K --goal G --algorithm A [--motions M] ...
///   foon compare  --foon F --kitchen K --goal G --motions M ...
///
/// Human-readable results go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace foon::cli
