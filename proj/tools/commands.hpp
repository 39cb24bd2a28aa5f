#pragma once

#include <string>
#include <vector>

namespace fracspde::cli {

// Exit codes: 0 success, 1 configuration/validation failure, 2 numerical
// contract failure (e.g. a probe contradiction or a violated bound).
int run(const std::vector<std::string>& args);

} // namespace fracspde::cli
