#pragma once

// Command-line front end. Every experiment can be run from flags or from a
// JSON config (`latwave run --config file.json`); both routes build the same
// canonical parameter object, so they produce byte-identical output.
//
// Exit status: 0 success, 1 a verification did not pass, 2 invalid
// configuration or arguments, 3 a module precondition was violated.

#include <iosfwd>

namespace latwave::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitDomainError = 3;

/// Environment variable naming the directory relative output paths resolve against.
inline constexpr const char* kOutputDirEnv = "LATWAVE_OUTPUT_DIR";

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace latwave::cli
