#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dualdi::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitTraining = 4;

/// Runs the command line (without the program name). Warnings go to `err`,
/// a single summary line per command goes to `out`.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

/// Parses `key = value` lines (`#` starts a comment) into pairs, in order.
std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text);

}  // namespace dualdi::app
