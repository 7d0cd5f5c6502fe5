#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace acgeom::cli {

// Stable process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 2,         // unparseable input, missing files, bad flags
  kExitData = 3,          // dimension mismatch, points at infinity
  kExitEstimation = 4,    // no model found
  kExitInsufficient = 5,  // too few correspondences
};

// Default worker count: ACGEOM_THREADS when set to a positive integer, else 1.
int DefaultThreads();

// Entry point of the `acgeom` tool. args excludes the program name. The run
// report goes to `out`, diagnostics to `err`.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace acgeom::cli
