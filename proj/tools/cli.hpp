#pragma once

#include <string>
#include <vector>

namespace acmm::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kIoError = 1;
inline constexpr int kValidation = 2;
inline constexpr int kDecodeFailure = 3;

// args excludes the program name.
int run(const std::vector<std::string>& args);
int main(int argc, char** argv);

}  // namespace acmm::cli
