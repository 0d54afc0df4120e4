#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace smoothcert::detail {

// Shortest decimal form that parses back to the same double.
inline std::string format_real(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace smoothcert::detail
