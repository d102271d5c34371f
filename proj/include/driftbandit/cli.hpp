#ifndef DRIFTBANDIT_CLI_HPP
#define DRIFTBANDIT_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace driftbandit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/**
 * Entry point for the `driftbandit` tool. args[0] is the program name.
 * Subcommands: run | sweep | bounds | trace.
 * Returns 0 on success, 2 for invalid flags or config, 1 for runtime failures.
 */
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace driftbandit::cli

#endif  // DRIFTBANDIT_CLI_HPP
