#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace juttner::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 2,
  kInversionFailure = 3,
  kVerificationFailure = 4,
  kInconclusive = 5,
};

/// Runs one command line (args excludes the program name). Results go to
/// out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace juttner::cli
