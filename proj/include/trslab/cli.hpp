#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trslab {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,     // verification failure
  kExitInput = 2,       // usage or input parse error
  kExitNearHard = 3,
  kExitNoConvergence = 4,
};

/// Runs `trslab <solve|experiment|verify> ...`; args excludes the program name.
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trslab
