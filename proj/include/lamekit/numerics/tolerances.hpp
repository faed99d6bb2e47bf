#pragma once

#include <string_view>

namespace lamekit {

struct Tolerances {
  double rtol = 1e-10;
  double atol = 1e-12;
  double xtol = 1e-10;
};

/// Parses "rtol=1e-9,atol=1e-13,xtol=1e-8" (any subset) or a bare number (sets rtol).
/// Throws ParseError on malformed input or non-positive values.
Tolerances parse_tolerances(std::string_view text, Tolerances base = {});

/// Defaults overridden by the LAME_KIT_TOL environment variable when set.
Tolerances default_tolerances();

}  // namespace lamekit
