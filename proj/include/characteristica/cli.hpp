#pragma once

#include <iosfwd>

namespace characteristica {

// Full command-line driver, separated from main() so tests can run it
// in-process and capture the streams. Returns the process exit code:
// 0 on success, 1 when a requested check does not hold (a residual fails,
// methods disagree, no solution template applies, a fixture fails), 2 on
// usage, parse, or engine errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace characteristica
