#pragma once

#include <cstdio>
#include <string>

namespace tpcorr::detail {

inline std::string format_double(double value, int significant = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, value);
  return buf;
}

}  // namespace tpcorr::detail
