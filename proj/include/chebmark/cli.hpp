#pragma once

#include <string>
#include <vector>

namespace chebmark::cli {

// Dispatches the chebmark subcommands (density, measure, extremal, bound,
// verify, reproduce, scan). Returns the process exit code: 0 success,
// 1 verification violation, 2 invalid input, 3 quantization failure.
int run(const std::vector<std::string>& args);

}  // namespace chebmark::cli
