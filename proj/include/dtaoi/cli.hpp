#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dtaoi {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitMismatch = 1,  // reproduce: output differs from the expected tables
    kExitUsage = 2,     // bad flags or configuration
    kExitNumerical = 3,
};

/// Runs the tool on `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dtaoi
