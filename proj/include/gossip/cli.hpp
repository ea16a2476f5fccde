#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gossip::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitGuard = 3;

// Entry point behind the gossip-age executable. `args` excludes the program
// name. Primary output goes to `out` (or --out), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gossip::cli
