#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rsc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitConsistency = 2;

/// Entry point of the `rsc` command line; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rsc
