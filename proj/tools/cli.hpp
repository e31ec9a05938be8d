#pragma once

#include <iosfwd>

namespace isynth::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kUnrealizable = 1, kInputError = 2, kResourceLimit = 3 };

/// Entry point of the `isynth` tool. Streams are injected for testing.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace isynth::cli
