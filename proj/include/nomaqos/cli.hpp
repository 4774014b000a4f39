#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nomaqos {

enum ExitCode : int {
    kExitOk = 0,
    kExitInvalid = 1,
    kExitInfeasible = 2,
    kExitCapHit = 3,
};

/// Entry point of the nomaqos tool. args excludes the program name.
/// Subcommands: solve, sweep, convergence, gen-tables.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nomaqos
