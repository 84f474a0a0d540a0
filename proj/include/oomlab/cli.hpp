#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace oomlab {

enum ExitCode : int {
  kExitOk = 0,
  kExitFail = 1,
  kExitUsage = 2,
  kExitInconclusive = 3,
};

/// Entry point of the `oomlab` command; `args` excludes the program name.
/// Reports go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Subcommand names accepted by run_cli.
std::vector<std::string> cli_commands();

}  // namespace oomlab
