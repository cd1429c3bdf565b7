#pragma once

#include <ostream>

namespace mclamp {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNoPairs = 1;
inline constexpr int kExitInputError = 2;

// Entry point of the `mclamp` tool: describe | eval | bench | thresholds | synth.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mclamp
