#pragma once

#include <iosfwd>

namespace otima::cli {

/// Exit codes of the command line tool.
inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_precision = 3;
inline constexpr int exit_mismatch = 4;

/// Entry point of the `otima` tool; diagnostics go to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace otima::cli
