#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kmono::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

/// Runs the kmono command line; `args` excludes the program name.
/// Returns 0 on success, 2 on bad input or usage, 3 on numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kmono::cli
