#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace fengshui {

// Exit codes: 0 success, 1 validation/runtime error, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

// args excludes the program name.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace fengshui
