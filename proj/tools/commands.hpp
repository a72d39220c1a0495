#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cdmaseq::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 1,
    kNumericalFailure = 2,
};

/// Runs the command line `args` (args[0] is the program name). Reports go to
/// `out`, diagnostics to `err`. Returns one of ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cdmaseq::cli
