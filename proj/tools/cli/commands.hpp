#pragma once

#include <string>
#include <vector>

namespace cvree::cli {

/// Exit codes: 0 success, 1 verification failures, 2 validation error,
/// 3 numerical guard, 4 search failure.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace cvree::cli
