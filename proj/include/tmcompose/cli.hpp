#pragma once

#include <string>
#include <vector>

namespace tmc::cli {

// Exit codes: 0 success, 1 prediction-check failure, 2 configuration error,
// 3 numeric failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericError = 3;

// Runs the command line (without the program name). Writes data files per
// the flags, diagnostics to stderr.
int run(const std::vector<std::string>& args);

}  // namespace tmc::cli
