#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rwre {

/// Exit codes: 0 success, 1 failed comparison, 2 usage or domain error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCompareFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace rwre
