#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace geodetect {

// Shortest round-trip decimal form; keeps emitted files byte-stable and
// loadable without precision loss.
inline std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace geodetect
