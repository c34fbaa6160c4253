#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace grapes::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kVerifyFailed = 1;
inline constexpr int kInputError = 2;
inline constexpr int kResourceLimit = 3;
inline constexpr int kInverseFailed = 4;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace grapes::cli
