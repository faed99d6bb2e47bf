#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace lamekit::cli {

inline constexpr std::string_view kVersion = "0.1.0";

/// Runs one CLI invocation; `args` excludes the program name.
/// Returns 0 on success, 1 on a domain failure (pole, vanishing symmetry, ...), 2 on a usage error.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// %.17g
std::string format_number(double v);

}  // namespace lamekit::cli
