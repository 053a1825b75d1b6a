#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace minen::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

/// Runs the command line `args` (without the program name). Diagnostics go
/// to `err`, progress lines to `out`. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace minen::cli
