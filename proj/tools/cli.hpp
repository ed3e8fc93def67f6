#pragma once

#include <iosfwd>

namespace percolab::cli {

inline constexpr int kExitCertified = 0;
inline constexpr int kExitError = 2;
inline constexpr int kExitNotCertified = 3;

// Parses argv and runs one subcommand. Human-readable output goes to `out`,
// diagnostics to `err`; files named by --json/--csv/--svg are written only
// after the command has finished.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace percolab::cli
