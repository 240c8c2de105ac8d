#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace stabsgd {

/// Exit codes for the command-line harness.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "STABSGD_OUTPUT_DIR";

/// Runs `stabsgd <subcommand> ...`; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stabsgd
