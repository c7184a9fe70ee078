#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace arbor::cli {

/// Exit codes of the `arbor` tool.
enum ExitCode : int { kSuccess = 0, kVerificationFailed = 1, kUsageError = 2 };

/// Runs one `arbor` invocation. `args` excludes the program name. Normal
/// output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace arbor::cli
