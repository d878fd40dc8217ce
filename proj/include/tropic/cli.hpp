#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tropic::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_internal = 1,
  exit_usage = 2,
  exit_budget = 3,
  exit_precondition = 4,
  exit_identity = 5,
};

/// Runs one command line (program name excluded). The JSON report goes to
/// `out`, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tropic::cli
