#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace becurv::cli {

inline constexpr int kOk = 0;
inline constexpr int kDomainError = 1;
inline constexpr int kUsageError = 2;
inline constexpr int kViolations = 3;

/// Runs the command line `args` (without the program name). Results go to
/// `out`; usage text and JSON error objects go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "%.12f" with negative zero printed as zero.
std::string format_number(double v);

}  // namespace becurv::cli
