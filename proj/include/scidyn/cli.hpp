#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scidyn {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_data = 2;

/// Runs one scidyn subcommand. `args` excludes the program name. Reports go
/// to `out` (or --out), diagnostics to `err`. Returns 0, 1 (usage) or 2 (data).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scidyn
