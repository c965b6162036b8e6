#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace billiard_lab {

inline constexpr int kSchemaVersion = 1;

/// Exit codes: 0 success, 1 failure to compute, 2 verdict differs from --expect.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace billiard_lab
