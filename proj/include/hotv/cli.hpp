#pragma once

// Experiment harness entry point. `args` holds the command-line tokens after
// the program name. Returns the process exit code:
//   0  success
//   1  usage or validation error (bad flags, malformed inputs, parameter
//      contract violations)
//   2  numerical failure (unsatisfiable plateau equations, non-converged
//      minimization)
// Outputs are written atomically; identical arguments produce byte-identical
// output.

#include <string>
#include <vector>

namespace hotv {

int run_cli(const std::vector<std::string>& args);

}  // namespace hotv
