#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace crystalbench::cli {

/// Process exit codes.
enum ExitCode : int {
    kPass = 0,
    kInternalError = 1,
    kUsage = 2,
    kHypothesisUnsatisfiable = 3,
    kBudgetExceeded = 4,
    kCheckFailed = 5,
};

/// Environment variable that overrides the default cell budget.
inline constexpr const char* kBudgetEnv = "CRYSTALBENCH_CELL_BUDGET";

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace crystalbench::cli
