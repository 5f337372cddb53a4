#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace frontier::cli {

enum ExitCode : int { kSuccess = 0, kValidationFailure = 1, kInternalError = 2 };

/// Runs one command line (without the program name). Results go to `out`
/// unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace frontier::cli
