#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hirschfa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (arguments after the program name). Results go to
/// `out`, diagnostics to `err`; returns the process exit code.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace hirschfa::cli
