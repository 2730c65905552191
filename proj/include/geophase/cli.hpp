#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace geophase {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // self-test failure
  kExitUsage = 2,    // bad flags, ranges or input files
  kExitNumeric = 3,  // numerical refusal at top level (GapClosure etc.)
};

/// Parses argv and runs one subcommand. Data goes to `out` (or --out), messages
/// to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace geophase
