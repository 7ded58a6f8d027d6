#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cgl::cli {

enum ExitCode : int { ok = 0, config_error = 2, solver_failure = 3 };

/// Entry point of the command-line tool; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cgl::cli
