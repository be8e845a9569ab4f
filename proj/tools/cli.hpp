#pragma once

#include <iosfwd>

namespace sepscope::cli {

/// Exit statuses: 0 success, 2 invalid input, 3 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNumerical = 3;

/// Parses argv, dispatches the subcommand, writes the JSON report to `out`
/// and errors (and --diagnostics lines) to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sepscope::cli
