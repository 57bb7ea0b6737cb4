#pragma once

namespace astra::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

/// astra-sim <subcommand> --config <path> [--out <dir>] [--seed <u64>]
///           [--set key=value ...]
int run(int argc, const char* const* argv);

}  // namespace astra::cli
