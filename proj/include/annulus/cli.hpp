#pragma once

// Command-line front end: eval, zeros, branch and grid subcommands emitting
// CSV (with a "# config:" comment line) or JSON.

#include <ostream>
#include <string>
#include <vector>

namespace annulus::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kRefineFailed = 3,
  kPartial = 4,
};

/// Runs one invocation. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker count for grid columns from ANNULUS_ZEROS_THREADS (unset or 0 = hardware).
unsigned thread_count_from_env();

}  // namespace annulus::cli
