#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace pcalloc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand (`args[0]` is the program name). Artifacts go to `out`
/// unless --output names a file; diagnostics go to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace pcalloc::cli
