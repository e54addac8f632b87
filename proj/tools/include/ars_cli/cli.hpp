#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ars::cli {

/// Exit status for malformed command lines.
inline constexpr int kUsageError = 2;
/// Exit status for failures after the command line was accepted.
inline constexpr int kRuntimeError = 1;

/// Runs the `ars` command line. `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ars::cli
