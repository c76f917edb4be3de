#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mfpotts {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitVerifyFailed = 1,
    kExitInvalid = 2,
    kExitDiscontinuity = 3,
};

/// Parses a grid: "a,b,c" or "start:stop:step" (stop included up to rounding).
std::vector<double> parse_grid(const std::string& text);

/// Formats a double with 17 significant digits.
std::string format_double(double x);

/// Runs one command; argv[0] is the program name. Results go to `out` (or
/// the --out file), diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mfpotts
