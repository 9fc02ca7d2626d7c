#pragma once

#include <iosfwd>

namespace zeno::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "ZENO_OUTPUT_DIR";

// Parses argv, runs the command and writes the table plus its sidecar.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace zeno::cli
