#pragma once

#include <iosfwd>

namespace dicke::cli {

enum ExitCode : int { kOk = 0, kUsageError = 1, kNumericalFailure = 2 };

// Entry point behind the `dicke` binary. Subcommands: sweep, energies,
// spectrum, levels, check. Returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dicke::cli
