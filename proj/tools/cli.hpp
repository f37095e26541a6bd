#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace simperm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitViolation = 2;

// Runs one command. `args` excludes the program name. Payloads go to `out`
// unless --out is given; diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace simperm::cli
