// Batch front-end: subcommand dispatch, CSV emission, exit-code contract.
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 validation violations (validate subcommand only).
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace specgap {

// In-process entry point (argv without the program name); reentrant.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace specgap
