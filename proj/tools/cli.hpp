#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace elastic::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kParseFailure = 1;
inline constexpr int kValidationFailure = 2;
inline constexpr int kNumericFailure = 3;

// Environment variable naming the directory for CSV outputs when --out is not given.
inline constexpr const char* kOutDirEnv = "ELASTIC_OUT_DIR";

// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace elastic::cli
