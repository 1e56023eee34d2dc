#pragma once

#include <iosfwd>

namespace hhqec {

/// Runs the command-line tool. Returns 0 on success, 2 on a usage error and 1 when a
/// command fails at runtime.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hhqec
