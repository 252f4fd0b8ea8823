#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fracdec::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 1;
inline constexpr int exit_computation = 2;
inline constexpr int exit_usage = 64;

/// Runs the command line `args` (args[0] is the program name). Results go to
/// `out` unless an --output file is given; diagnostics go to `err` as one
/// line starting with "error:".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace fracdec::cli
