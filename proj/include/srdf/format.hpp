#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace srdf {

/// Nine significant digits; "inf", "-inf" and "nan" spelled out.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace srdf
