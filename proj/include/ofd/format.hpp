#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

namespace ofd {

/// Shortest "%.Ng" rendering that round-trips the double.
inline std::string format_real(double x) {
  char buf[40];
  for (int precision = 6; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

template <class T, class F>
std::string join(const std::vector<T>& items, char sep, F&& render) {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k) out += sep;
    out += render(items[k]);
  }
  return out;
}

}  // namespace ofd
