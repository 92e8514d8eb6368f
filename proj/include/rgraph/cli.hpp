#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rgraph::cli {

enum ExitCode : int { kTrue = 0, kFalse = 1, kUsage = 2, kFailure = 3 };

/// Runs one `rg` command. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rgraph::cli
