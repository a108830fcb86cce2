#pragma once

#include <iosfwd>

namespace pwsim::cli {

/// Entry point for the `pwsim` tool. Data goes to `out`, diagnostics to `err`.
/// Returns 0 on success, 2 on a usage error and 1 on a runtime error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pwsim::cli
