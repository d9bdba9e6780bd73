#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sftm {

// Whole command-line surface as a callable, so tests can drive it
// in-process. argv excludes the program name. Exit codes: 0 success
// (mapped / valid / witnesses found), 2 negative outcome (infeasible /
// violations / no witnesses), 1 input or internal error.
int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

} // namespace sftm
