#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pbpois::cli {

enum ExitCode : int { kSuccess = 0, kViolation = 1, kInputError = 2, kNumericalFailure = 3 };

/// Runs one command line (without the program name). Tables go to `out`
/// unless --out is given, diagnostics and notes to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pbpois::cli
