#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace lba {

/// Shortest decimal string that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Fixed significant-digit formatting (general format, like printf %.Ng).
inline std::string format_double(double v, int significant) {
  if (significant <= 0) return format_double(v);
  char buf[512];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, significant);
  if (res.ec != std::errc()) return format_double(v);
  return std::string(buf, res.ptr);
}

}  // namespace lba
