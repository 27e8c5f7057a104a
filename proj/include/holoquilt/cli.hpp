#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace holoquilt {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Runs `holoquilt <command> [flags...]`. `args` excludes the program name.
// Normal output (help, CSV) goes to `out`; diagnostics and timings to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace holoquilt
