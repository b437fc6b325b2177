#pragma once

#include <cstdio>
#include <string>

namespace tpsig {

// 17 significant digits: enough for exact double round-trip, used for all
// machine-facing output so identical inputs give byte-identical files.
inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Fixed 9 decimal places for aligned human-facing tables.
inline std::string fmt_fixed9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9f", v);
  return buf;
}

}  // namespace tpsig
