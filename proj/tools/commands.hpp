#pragma once

namespace fermiopt::cli {

// Parses argv, runs one subcommand and returns the process exit code:
// 0 success, 2 validation error, 3 resource cap, 4 internal invariant violation.
int run(int argc, char** argv);

} // namespace fermiopt::cli
