#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace grating {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

/// Runs the `grating` tool. `args` excludes the program name. Data goes to `out`
/// unless --out is given; diagnostics go to `err`.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace grating
