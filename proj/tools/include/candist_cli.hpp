#pragma once

#include <string>
#include <vector>

namespace candist::cli {

/// Runs the command line `args` (without the program name) and returns the
/// process exit code: 0 success, 1 input error, 2 runtime failure.
int run(const std::vector<std::string>& args);

}  // namespace candist::cli
