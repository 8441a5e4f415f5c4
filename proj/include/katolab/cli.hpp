#pragma once

#include <string>
#include <vector>

namespace katolab {

/// Exit status of the command-line tool.
enum ExitCode : int {
  kExitPassed = 0,
  kExitViolations = 1,
  kExitInputError = 2,
  kExitNumericalError = 3,
};

/// Parses arguments (argv[0] excluded) and runs one subcommand:
/// mesh, kato, constants, verify or sweep. Diagnostics go to stderr.
int run_cli(const std::vector<std::string>& args);

int run_cli(int argc, char** argv);

} // namespace katolab
