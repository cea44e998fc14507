#include "ragleak/hash.hpp"

#include <cstdio>

namespace ragleak {

std::string content_digest(std::string_view data) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(data)));
    return std::string(buf, 16);
}

}  // namespace ragleak
