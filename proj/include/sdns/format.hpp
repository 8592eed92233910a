#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace sdns {

/// Round-trip decimal form used for every CSV number (17 significant digits).
inline std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace sdns
