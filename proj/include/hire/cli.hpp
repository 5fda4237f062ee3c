#pragma once

#include <ostream>

namespace hire {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitIncompatible = 3;

/// Entry point of the `hire` tool. Subcommands: gen, train-teacher, distill,
/// eval, sweep, ablate. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hire
