#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tgeom::cli {

/// Exit codes: 0 success / property holds, 1 checked property fails,
/// 2 usage or config error, 3 numerical failure.
enum Exit : int { ok = 0, fails = 1, usage = 2, numerical = 3 };

/// Runs the command line `args` (without the program name).
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace tgeom::cli
