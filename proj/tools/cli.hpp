#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace misalign::cli {

enum ExitCode : int { ok = 0, validation_failure = 1, usage_error = 2 };

/// Runs one invocation; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace misalign::cli
