#include "fsrkit/error.hpp"

#include <algorithm>
#include <cstdlib>

namespace fsrkit {

std::size_t exhaustive_bound() {
  static const std::size_t bound = [] {
    std::size_t b = 24;
    if (const char* env = std::getenv("FSRKIT_MAX_STAGE")) {
      char* end = nullptr;
      unsigned long v = std::strtoul(env, &end, 10);
      if (end != env && *end == '\0' && v > 0) b = std::min<std::size_t>(v, 30);
    }
    return b;
  }();
  return bound;
}

void require_within_bound(std::size_t n, const char* what) {
  if (n > exhaustive_bound()) {
    throw BoundExceeded(std::string(what) + ": " + std::to_string(n) + " exceeds exhaustive bound " +
                        std::to_string(exhaustive_bound()));
  }
}

}  // namespace fsrkit
