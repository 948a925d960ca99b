#pragma once

namespace airy::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

// Parses argv, runs one subcommand and returns the process exit code.
int run(int argc, char **argv);

}  // namespace airy::cli
