#pragma once

#include <iosfwd>

namespace unshuffle {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Entry point behind the `unshuffle` executable. Subcommands: solve,
// simulate, demo-failure, diagnose.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace unshuffle
