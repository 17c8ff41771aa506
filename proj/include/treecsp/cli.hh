#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace treecsp
{
    inline constexpr int exit_found = 0;
    inline constexpr int exit_none = 1;
    inline constexpr int exit_error = 2;
    inline constexpr int exit_budget = 3;

    /// Runs one subcommand. args excludes the program name. Reports go to
    /// out, diagnostics to err.
    auto run_cli(const std::vector<std::string> & args, std::ostream & out, std::ostream & err) -> int;
}
