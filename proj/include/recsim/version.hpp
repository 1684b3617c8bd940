#pragma once

namespace recsim {
inline constexpr const char* kVersion = "0.1.0";
}
