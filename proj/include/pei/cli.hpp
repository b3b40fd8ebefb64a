// Command-line front end: problem specification, sweeps, oracle runs and
// machine-readable reports (json/csv/table).
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pei::cli {

// Exit codes: 0 success, 1 verification failure, 2 invalid arguments,
// 3 resource cap exceeded.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitInvalidArguments = 2;
inline constexpr int kExitCapExceeded = 3;

// Runs the CLI with the given arguments (program name excluded) and returns
// the process exit code. All report output goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace pei::cli
