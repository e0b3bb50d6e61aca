#pragma once

#include <charconv>
#include <string>

namespace shs {

// Shortest round-trip decimal form of a double. All reports and CSV output
// go through this so repeated runs are byte-identical.
inline std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace shs
