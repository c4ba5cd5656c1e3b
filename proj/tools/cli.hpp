#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ceq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNotFound = 2;

/// Runs one command line. args excludes the program name.
int run(std::vector<std::string> const &args, std::ostream &out, std::ostream &err);

} // namespace ceq::cli
