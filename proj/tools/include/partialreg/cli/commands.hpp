#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace partialreg::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInternalError = 1,
  kValidationError = 2,
  kDegenerate = 3,
  kUsage = 64,
};

/// Runs one command line. `args` excludes the program name, e.g.
/// {"decompose", "--input", "data.csv", "--response", "y", "--regressors", "x1,x2"}.
/// Reports go to `out`, diagnostics and usage text to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 1e-8 unless PARTIALREG_TOLERANCE holds a positive number.
/// Throws partialreg::ValidationError for an unparsable value.
double default_tolerance();

}  // namespace partialreg::cli
