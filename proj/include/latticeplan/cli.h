#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace latticeplan {

/// Exit codes: 0 success, 1 a requested check failed, 2 usage error, 3 any other error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitError = 3;

/// Runs one command; `args` excludes the program name.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace latticeplan
