#pragma once

// Command-line front end. Exit status: 0 success, 1 a check or bound failed,
// 2 usage or input error.

#include <iosfwd>
#include <string>
#include <vector>

namespace mergelab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace mergelab
