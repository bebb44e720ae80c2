#pragma once

namespace fhn {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitConfig = 2,
  kExitGuard = 3,
  kExitBlowUp = 4,
  kExitSolver = 5,
  kExitBracket = 6,
};

/// Entry point of the `fhnlab` tool: simulate, spectrum, bifurcate, reproduce, verify.
int run_cli(int argc, char** argv);

}  // namespace fhn
