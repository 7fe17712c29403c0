#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dnabrick {

enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_usage = 2,
    exit_validation = 3,
    exit_io = 4,
};

/// Environment variable overriding the default cost rate (USD per base).
inline constexpr const char* kCostRateEnv = "DNABRICK_COST_RATE";

/// Runs one CLI invocation. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dnabrick
