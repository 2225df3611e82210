#pragma once

#include <iosfwd>

namespace homoghj {

/// Command-line front end. Subcommands: vanish, homog, effham, sharpness, solve, exact.
///
/// Option values come from, in increasing priority: built-in defaults, the flat
/// JSON object given by --config (keys are long flag names), explicit flags.
/// Returns 0 on success, 2 on configuration errors and 1 on numerical failures.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace homoghj
