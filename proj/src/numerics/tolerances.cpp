#include "lamekit/numerics/tolerances.hpp"

#include <cstdlib>
#include <string>

#include "lamekit/errors.hpp"

namespace lamekit {

namespace {

double parse_positive(std::string_view token, std::string_view what) {
  const std::string s(token);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !(v > 0.0))
    throw ParseError("tolerance '" + std::string(what) + "' must be a positive number, got '" + s + "'");
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Tolerances parse_tolerances(std::string_view text, Tolerances tol) {
  if (text.find('=') == std::string_view::npos) {
    tol.rtol = parse_positive(trim(text), "rtol");
    return tol;
  }
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ParseError("malformed tolerance item '" + std::string(item) + "'");
    const auto key = trim(item.substr(0, eq));
    const auto val = trim(item.substr(eq + 1));
    if (key == "rtol")
      tol.rtol = parse_positive(val, key);
    else if (key == "atol")
      tol.atol = parse_positive(val, key);
    else if (key == "xtol")
      tol.xtol = parse_positive(val, key);
    else
      throw ParseError("unknown tolerance key '" + std::string(key) + "'");
  }
  return tol;
}

Tolerances default_tolerances() {
  if (const char* env = std::getenv("LAME_KIT_TOL")) return parse_tolerances(env);
  return {};
}

}  // namespace lamekit
