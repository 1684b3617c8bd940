#pragma once

#include <array>
#include <charconv>
#include <string>

namespace recsim {

/// Shortest round-trip decimal form of a double. Used everywhere numbers
/// reach CSV or filenames so reruns are byte-identical.
inline std::string format_number(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

} // namespace recsim
