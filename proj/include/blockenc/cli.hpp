#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace blockenc {

// Exit codes: 0 success, 1 failed verification or infeasible sweep point,
// 2 invalid arguments.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Shortest decimal with 12 significant digits.
std::string format_number(double x);

}  // namespace blockenc
