#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace oppnet::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int { Ok = 0, UsageError = 1, DataFailure = 2 };

/// Runs one invocation; `args[0]` is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace oppnet::cli
