#pragma once

#include <string>
#include <vector>

#include "artic/types.hpp"

namespace artic::cli {

/// Process exit code for a failure class. 0 is success, 1 an unexpected
/// failure; structured errors map to 2 (bad input or I/O), 3 (missing
/// entity), 4 (mismatched or incomplete input), 5 (estimation failure).
int exit_code(ErrorCode code);

/// Runs one CLI invocation (args exclude the program name) and returns the
/// process exit code. Errors print a single line to stderr.
int run(const std::vector<std::string>& args);

}  // namespace artic::cli
