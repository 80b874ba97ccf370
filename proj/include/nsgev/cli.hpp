#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nsgev::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

// Runs one subcommand. `args` excludes the program name. Returns 0 on
// success, 1 on domain errors and 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nsgev::cli
