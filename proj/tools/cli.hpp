#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace htype::cli {

enum ExitCode : int { ok = 0, validation_error = 1, numerical_failure = 2 };

/// Runs one command line (args excludes the program name). Output goes to
/// `out` unless the command was given --out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace htype::cli
