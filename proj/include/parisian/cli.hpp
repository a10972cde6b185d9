#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace parisian::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNumerical = 3, kPartial = 4 };

// Runs one command line (args[0] is the program name). Output goes to `out`,
// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace parisian::cli
