#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sympcoh::cli {

// Exit codes: 0 success, 1 invalid input (file, format or covariance
// invariant), 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitUsage = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sympcoh::cli
