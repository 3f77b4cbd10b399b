#pragma once

#include <iosfwd>

namespace batchgcd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitMismatch = 3;

/// Entry point of the `batchgcd` tool. Subcommands: generate, run, verify,
/// bench, fit.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace batchgcd::cli
