#pragma once

#include <string>
#include <string_view>

namespace nabla {

/// Shortest decimal text that reads back to the same double.
std::string format_real(double x);

/// Parses a complete decimal literal (optional sign, optional exponent).
/// Throws ParseError naming `what` on failure.
double parse_real(std::string_view text, std::string_view what = "number");

} // namespace nabla
