#pragma once

namespace wl1 {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace wl1
