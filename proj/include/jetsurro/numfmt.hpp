#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>

#include "jetsurro/errors.hpp"

namespace jetsurro {

/// Shortest decimal representation that round-trips the exact double.
/// All persisted artifacts (CSV, JSON, reports) go through this so reruns
/// are byte-identical and reload is lossless.
inline std::string fmt_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ConfigError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

/// Fixed-precision formatting for SVG coordinates; trailing zeros kept so
/// output is stable.
inline std::string fmt_fixed(double v, int precision = 2) {
  if (!std::isfinite(v)) return "0";
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, precision);
  return std::string(buf, res.ptr);
}

}  // namespace jetsurro
