#pragma once

#include <ostream>

namespace hvacsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitConfigError = 2;

// Subcommands: synth, simulate, sweep, export, report.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace hvacsim::cli
