#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace retention {

/// Shortest-ish round-trippable text for a double: 17 significant digits via
/// printf, so parsing the text recovers the exact bit pattern. Infinities
/// print as "inf"/"-inf".
inline std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace retention
