#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dbalign::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

/// Runs the command line tool. `detect` returns 0 for H0 and 1 for H1; every
/// other subcommand returns 0 on success. Usage, input and I/O errors return
/// 2, numerical failures 3.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "0.1,0.2,0.5" or "start:stop:step" (inclusive of stop up to rounding).
std::vector<double> parse_grid(const std::string& text);

}  // namespace dbalign::cli
