#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace collopt::cli {

enum ExitCode : int { success = 0, validation_failure = 1, usage_error = 2 };

/// Runs the command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace collopt::cli
