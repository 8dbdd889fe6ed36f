#ifndef PLA_TOOLS_COMMANDS_HPP
#define PLA_TOOLS_COMMANDS_HPP

#include <iosfwd>

namespace pla::cli {

// Exit codes are part of the interface.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitResource = 3;
inline constexpr int kExitNumeric = 4;

/// Entry point shared by the binary and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace pla::cli

#endif  // PLA_TOOLS_COMMANDS_HPP
