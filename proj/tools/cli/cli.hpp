#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dreams::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_validation = 1,
    exit_usage = 2,
    exit_io = 3,
};

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dreams::cli
