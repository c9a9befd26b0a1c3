#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace selcalc {

enum ExitCode : int {
  kExitOk = 0,
  kExitNegative = 1,       // inequivalent, impure, or a failing suite
  kExitIndeterminate = 2,  // no decision could be reached
  kExitUsage = 3,
  kExitInternal = 4,
};

// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace selcalc
