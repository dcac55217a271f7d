#include "fkdv/format.hpp"

#include <charconv>
#include <cstdio>

namespace fkdv {

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return {buf, ptr};
}

std::string sci12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

}  // namespace fkdv
