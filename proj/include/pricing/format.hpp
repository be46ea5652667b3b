#pragma once

#include <charconv>
#include <string>

namespace pricing {

// Locale-independent significant-digit formatting (dot decimal separator).
inline std::string format_double(double v, int digits = 12) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

// Shortest round-trip form; parsing it back recovers the exact bits.
inline std::string format_exact(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace pricing
