#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gcoh::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kNegative = 1;
inline constexpr int kInputError = 2;
inline constexpr int kNumericError = 3;

/// Runs one command. args excludes the program name. The result document
/// goes to out (or the -o file); errors go to err as {"error": {...}}.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace gcoh::cli
